#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "wavedet/csv.hpp"
#include "wavedet/detectors.hpp"
#include "wavedet/random.hpp"
#include "wavedet/signals.hpp"
#include "wavedet/stats.hpp"
#include "wavedet/wavelet.hpp"

namespace wavedet {

inline std::vector<double> default_snr_grid() {
  std::vector<double> grid(21);
  for (int i = 0; i <= 20; ++i) grid[i] = -20.0 + i;
  return grid;
}

/// Seeded Monte Carlo protocol. Results are functions of the config fields
/// only; the worker count never changes any output.
struct ExperimentConfig {
  ChirpSpec chirp;
  std::string wavelet = "db9";
  ScaleSet scales{std::vector<int>{3, 4, 5, 6}};
  double sigma_n = 1.0;
  double pfa = 1e-3;
  std::vector<double> snr_grid = default_snr_grid();
  std::uint64_t trials_per_point = 10000;
  std::uint64_t calibration_trials = 1000000;
  std::uint64_t master_seed = 1;
  BoundaryMode mode = BoundaryMode::zero_pad;
  unsigned workers = 0;  // 0 = all hardware threads

  void validate() const {
    chirp.validate();
    if (!(sigma_n > 0.0))
      throw std::domain_error("config: sigma_n must be positive");
    if (!(pfa > 0.0 && pfa < 1.0))
      throw std::domain_error("config: pfa must be in (0,1)");
    if (trials_per_point < 1)
      throw std::domain_error("config: trials_per_point must be >= 1");
    // keep the calibration quantile at least 10 samples away from the tail
    if (static_cast<double>(calibration_trials) < 10.0 / pfa)
      throw std::domain_error("config: calibration_trials must be >= 10/pfa");
    scales.validate();
    const int n_levels = std::countr_zero(chirp.n_samples);
    for (int lv : scales.levels)
      if (lv > n_levels)
        throw std::domain_error("config: scale level " + std::to_string(lv) +
                                " exceeds log2(n_samples)");
    for (std::size_t i = 1; i < snr_grid.size(); ++i)
      if (!(snr_grid[i - 1] < snr_grid[i]))
        throw std::domain_error("config: snr_grid must be strictly increasing");
  }
};

using DetectorModel = std::variant<MaxDetectorModel, LinearDetectorModel>;

struct DetectorVariant {
  enum class Kind { max, linear };
  Kind kind = Kind::linear;
  ScaleSet scales;
};

struct PdPoint {
  double snr_db = 0.0;
  double pd = 0.0;
  ConfidenceInterval ci;
};

struct PdCurve {
  std::string detector;
  ScaleSet scales;
  std::vector<PdPoint> points;
  double pfa = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

struct PdEstimate {
  double pd = 0.0;
  ConfidenceInterval ci;
};

using NoiseSource = std::function<SampledSignal(std::uint64_t trial)>;

namespace detail {

inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Static contiguous split over [0, n). Each index is processed exactly once
// by exactly one worker; per-index work must depend only on the index.
template <class Fn>
void parallel_for(std::uint64_t n, unsigned workers, Fn&& fn) {
  workers = resolve_workers(workers);
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    fn(std::uint64_t{0}, n);
    return;
  }
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, n));
  const std::uint64_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = std::min<std::uint64_t>(w * chunk, n);
    const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, n);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct PreparedSegment {
  std::size_t union_idx = 0;
  std::size_t steady_len = 0;
  std::vector<double> weights;  // steady part only
};

struct PreparedDetector {
  bool is_max = false;
  double v_t = 0.0;
  std::size_t max_union_idx = 0;
  std::vector<PreparedSegment> segments;
};

struct EvalContext {
  std::vector<int> union_levels;
  std::vector<PreparedDetector> detectors;

  double statistic(std::size_t det,
                   const std::vector<DetailCoefficients>& details) const {
    const PreparedDetector& d = detectors[det];
    if (d.is_max) return max_statistic(details[d.max_union_idx]);
    double acc = 0.0;
    for (const auto& seg : d.segments) {
      const double* dv = details[seg.union_idx].values.data();
      for (std::size_t k = 0; k < seg.steady_len; ++k)
        acc += dv[k] * seg.weights[k];
    }
    return acc;
  }
};

inline EvalContext prepare_detectors(const ExperimentConfig& cfg,
                                     const WaveletFilter& filter,
                                     std::span<const DetectorModel> models) {
  EvalContext ctx;
  auto union_index = [&ctx](int level) {
    auto it = std::find(ctx.union_levels.begin(), ctx.union_levels.end(), level);
    if (it != ctx.union_levels.end())
      return static_cast<std::size_t>(it - ctx.union_levels.begin());
    ctx.union_levels.push_back(level);
    return ctx.union_levels.size() - 1;
  };
  const int n_levels = std::countr_zero(cfg.chirp.n_samples);
  for (const auto& model : models) {
    PreparedDetector det;
    if (const auto* mx = std::get_if<MaxDetectorModel>(&model)) {
      if (mx->filter.name != filter.name || mx->mode != cfg.mode)
        throw std::domain_error("max model filter/mode does not match config");
      if (mx->scale < 1 || mx->scale > n_levels)
        throw std::domain_error("max model scale out of range for config");
      det.is_max = true;
      det.v_t = mx->v_t;
      det.max_union_idx = union_index(mx->scale);
    } else {
      const auto& lin = std::get<LinearDetectorModel>(model);
      if (lin.filter.name != filter.name || lin.mode != cfg.mode)
        throw std::domain_error("linear model filter/mode does not match config");
      det.v_t = lin.v_t;
      for (const auto& seg : lin.a.segments) {
        if (seg.level < 1 || seg.level > n_levels ||
            seg.length != cfg.chirp.n_samples >> seg.level)
          throw std::domain_error("linear model layout does not match config");
        PreparedSegment ps;
        ps.union_idx = union_index(seg.level);
        ps.steady_len = seg.steady_len;
        ps.weights.assign(
            lin.a.weights.begin() + static_cast<long>(seg.offset),
            lin.a.weights.begin() + static_cast<long>(seg.offset + seg.steady_len));
        det.segments.push_back(std::move(ps));
      }
    }
    ctx.detectors.push_back(std::move(det));
  }
  std::vector<std::size_t> order(ctx.union_levels.size());
  // keep union levels sorted for the shared cascade; remap indices
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ctx.union_levels[a] < ctx.union_levels[b];
  });
  std::vector<std::size_t> inverse(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) inverse[order[i]] = i;
  std::vector<int> sorted_levels(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    sorted_levels[i] = ctx.union_levels[order[i]];
  ctx.union_levels = std::move(sorted_levels);
  for (auto& det : ctx.detectors) {
    if (det.is_max) det.max_union_idx = inverse[det.max_union_idx];
    for (auto& seg : det.segments) seg.union_idx = inverse[seg.union_idx];
  }
  return ctx;
}

}  // namespace detail

/// Per-detector decision bitmap over `trials` independent observations.
/// Trial t draws its noise from substream (purpose, stream_base + t); all
/// detectors see the same observation, so comparisons across detectors are
/// paired. Output is independent of the worker count.
inline std::vector<std::vector<std::uint8_t>> decision_matrix(
    const ExperimentConfig& cfg, std::span<const DetectorModel> models,
    Hypothesis hyp, double snr_db, StreamPurpose purpose,
    std::uint64_t stream_base, std::uint64_t trials) {
  cfg.validate();
  const WaveletFilter filter = make_wavelet(cfg.wavelet);
  const detail::EvalContext ctx = detail::prepare_detectors(cfg, filter, models);
  const SampledSignal s_hat = gen_chirp(cfg.chirp);
  std::vector<std::vector<std::uint8_t>> decisions(
      models.size(), std::vector<std::uint8_t>(trials, 0));
  detail::parallel_for(trials, cfg.workers, [&](std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t t = b; t < e; ++t) {
      RandomStream stream = substream(cfg.master_seed, purpose, stream_base + t);
      SampledSignal noise = gen_awgn(cfg.chirp.n_samples, cfg.sigma_n, stream);
      const SampledSignal obs =
          hyp == Hypothesis::h1
              ? compose_observation(s_hat, noise, snr_db, cfg.sigma_n,
                                    Hypothesis::h1)
              : std::move(noise);
      const auto details = analyze_levels(obs, filter, ctx.union_levels, cfg.mode);
      for (std::size_t d = 0; d < ctx.detectors.size(); ++d)
        decisions[d][t] =
            decide(ctx.statistic(d, details), ctx.detectors[d].v_t) ? 1 : 0;
    }
  });
  return decisions;
}

namespace detail {

inline std::vector<MaxDetectorModel> calibrate_max_models(
    const ExperimentConfig& cfg, std::span<const int> levels,
    const NoiseSource* noise_hook) {
  cfg.validate();
  const WaveletFilter filter = make_wavelet(cfg.wavelet);
  const std::uint64_t trials = cfg.calibration_trials;
  std::vector<std::vector<double>> samples(
      levels.size(), std::vector<double>(trials, 0.0));
  parallel_for(trials, cfg.workers, [&](std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t t = b; t < e; ++t) {
      SampledSignal noise = [&] {
        if (noise_hook) return (*noise_hook)(t);
        RandomStream stream =
            substream(cfg.master_seed, StreamPurpose::max_calibration, t);
        return gen_awgn(cfg.chirp.n_samples, cfg.sigma_n, stream);
      }();
      const auto details = analyze_levels(noise, filter, levels, cfg.mode);
      for (std::size_t li = 0; li < levels.size(); ++li)
        samples[li][t] = max_statistic(details[li]);
    }
  });
  std::vector<MaxDetectorModel> models;
  models.reserve(levels.size());
  for (std::size_t li = 0; li < levels.size(); ++li) {
    MaxDetectorModel m;
    m.filter = filter;
    m.scale = levels[li];
    m.mode = cfg.mode;
    m.pfa = cfg.pfa;
    m.v_t = empirical_quantile(samples[li], 1.0 - cfg.pfa);
    m.calibration.trials = trials;
    m.calibration.seed = cfg.master_seed;
    m.check_invariants();
    models.push_back(std::move(m));
  }
  return models;
}

}  // namespace detail

/// Monte Carlo threshold for the max detector at the config's single scale:
/// the (1-pfa) empirical quantile of the max-abs statistic over noise-only
/// trials. The optional noise source replaces the seeded streams (test hook;
/// it must be safe to call concurrently for distinct trial indices).
inline MaxDetectorModel calibrate_max_threshold(const ExperimentConfig& cfg,
                                                const NoiseSource& noise) {
  if (cfg.scales.levels.size() != 1)
    throw std::domain_error("max calibration expects a single scale");
  return detail::calibrate_max_models(cfg, cfg.scales.levels, &noise).front();
}

inline MaxDetectorModel calibrate_max_threshold(const ExperimentConfig& cfg) {
  if (cfg.scales.levels.size() != 1)
    throw std::domain_error("max calibration expects a single scale");
  return detail::calibrate_max_models(cfg, cfg.scales.levels, nullptr).front();
}

/// Matched-coefficient linear detector for the given scale set, thresholded
/// analytically at the config's pfa.
inline LinearDetectorModel build_matched_linear_detector(
    const ExperimentConfig& cfg, const ScaleSet& scales) {
  cfg.validate();
  const WaveletFilter filter = make_wavelet(cfg.wavelet);
  const SampledSignal s_hat = gen_chirp(cfg.chirp);
  const ConcatDetails d_s = concat_details(s_hat, filter, scales, cfg.mode);
  CoefficientVector a = matched_coefficients(d_s);
  return make_linear_detector(filter, scales, cfg.mode, std::move(a),
                              cfg.sigma_n, cfg.pfa);
}

inline std::uint64_t count_ones(std::span<const std::uint8_t> bits) {
  std::uint64_t n = 0;
  for (std::uint8_t b : bits) n += b;
  return n;
}

/// Detection-rate estimate over trials_per_point H1 observations at the given
/// SNR, with a 95% Wilson interval. snr_index selects the evaluation
/// substream block so that sweeps pair trials across detectors per grid
/// point while keeping points independent.
inline PdEstimate estimate_pd(const DetectorModel& det,
                              const ExperimentConfig& cfg, double snr_db,
                              std::uint64_t snr_index = 0) {
  const DetectorModel models[] = {det};
  const auto dec = decision_matrix(cfg, models, Hypothesis::h1, snr_db,
                                   StreamPurpose::evaluation,
                                   snr_index * cfg.trials_per_point,
                                   cfg.trials_per_point);
  const std::uint64_t hits = count_ones(dec[0]);
  PdEstimate est;
  est.pd = static_cast<double>(hits) / static_cast<double>(cfg.trials_per_point);
  est.ci = binomial_ci(hits, cfg.trials_per_point, 0.95);
  return est;
}

/// False-alarm rate over noise-only trials (disjoint substream range from
/// both calibration and evaluation).
inline PdEstimate estimate_false_alarm(const DetectorModel& det,
                                       const ExperimentConfig& cfg,
                                       std::uint64_t trials) {
  if (trials == 0) throw std::domain_error("estimate_false_alarm: trials >= 1");
  const DetectorModel models[] = {det};
  const auto dec = decision_matrix(cfg, models, Hypothesis::h0, 0.0,
                                   StreamPurpose::false_alarm, 0, trials);
  const std::uint64_t hits = count_ones(dec[0]);
  PdEstimate est;
  est.pd = static_cast<double>(hits) / static_cast<double>(trials);
  est.ci = binomial_ci(hits, trials, 0.95);
  return est;
}

inline std::string scales_label(const ScaleSet& scales) {
  std::string s;
  for (std::size_t i = 0; i < scales.levels.size(); ++i) {
    if (i) s += '+';
    s += std::to_string(scales.levels[i]);
  }
  return s;
}

/// Builds the calibrated model for each variant: Monte Carlo thresholds for
/// max variants (one shared noise pass), analytic matched models for linear
/// variants.
inline std::vector<DetectorModel> build_variant_models(
    const ExperimentConfig& cfg, std::span<const DetectorVariant> variants) {
  std::vector<int> max_levels;
  for (const auto& v : variants)
    if (v.kind == DetectorVariant::Kind::max) {
      if (v.scales.levels.size() != 1)
        throw std::domain_error("max variant must have exactly one scale");
      if (std::find(max_levels.begin(), max_levels.end(), v.scales.levels[0]) ==
          max_levels.end())
        max_levels.push_back(v.scales.levels[0]);
    }
  std::vector<MaxDetectorModel> max_models;
  if (!max_levels.empty())
    max_models = detail::calibrate_max_models(cfg, max_levels, nullptr);
  std::vector<DetectorModel> models;
  models.reserve(variants.size());
  for (const auto& v : variants) {
    if (v.kind == DetectorVariant::Kind::max) {
      const auto it =
          std::find(max_levels.begin(), max_levels.end(), v.scales.levels[0]);
      models.emplace_back(max_models[static_cast<std::size_t>(
          it - max_levels.begin())]);
    } else {
      models.emplace_back(build_matched_linear_detector(cfg, v.scales));
    }
  }
  return models;
}

/// One Pd curve per variant over the config's SNR grid. At each grid point
/// every variant sees the same trials_per_point observations (shared noise
/// substreams), so cross-variant comparisons are paired.
inline std::vector<PdCurve> sweep(const ExperimentConfig& cfg,
                                  std::span<const DetectorVariant> variants) {
  cfg.validate();
  std::vector<PdCurve> curves;
  curves.reserve(variants.size());
  for (const auto& v : variants) {
    PdCurve c;
    c.detector = v.kind == DetectorVariant::Kind::max ? "max" : "linear";
    c.scales = v.scales;
    c.pfa = cfg.pfa;
    c.trials = cfg.trials_per_point;
    c.seed = cfg.master_seed;
    curves.push_back(std::move(c));
  }
  if (variants.empty() || cfg.snr_grid.empty()) return curves;

  const std::vector<DetectorModel> models = build_variant_models(cfg, variants);
  for (std::size_t si = 0; si < cfg.snr_grid.size(); ++si) {
    const double snr = cfg.snr_grid[si];
    const auto dec = decision_matrix(cfg, models, Hypothesis::h1, snr,
                                     StreamPurpose::evaluation,
                                     si * cfg.trials_per_point,
                                     cfg.trials_per_point);
    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
      const std::uint64_t hits = count_ones(dec[vi]);
      PdPoint pt;
      pt.snr_db = snr;
      pt.pd = static_cast<double>(hits) /
              static_cast<double>(cfg.trials_per_point);
      pt.ci = binomial_ci(hits, cfg.trials_per_point, 0.95);
      curves[vi].points.push_back(pt);
    }
  }
  return curves;
}

/// Analytic two-component comparison of the max and linear statistics with
/// unit variances, nonnegative means and one-sided (positive peak)
/// thresholding. Both detectors use the same threshold V, set so that a
/// single component's false-alarm mass is pfa_x; the max statistic then sees
/// roughly twice that false-alarm rate, the linear one exactly pfa_x.
struct TwoComponentResult {
  double pd_max = 0.0;
  double pd_linear = 0.0;
  double v_t = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
};

inline TwoComponentResult two_component_comparison(double mu1, double mu2,
                                                   double pfa_x) {
  if (!(mu1 >= 0.0 && mu2 >= 0.0))
    throw std::domain_error("two_component_comparison: means must be >= 0");
  if (!(pfa_x > 0.0 && pfa_x < 0.5))
    throw std::domain_error("two_component_comparison: pfa_x must be small");
  TwoComponentResult r;
  r.v_t = normal_quantile(1.0 - pfa_x);
  const double norm = std::hypot(mu1, mu2);
  if (norm > 0.0) {
    r.a1 = mu1 / norm;
    r.a2 = mu2 / norm;
  } else {
    r.a1 = r.a2 = 0.70710678118654752;  // equal-information limit
  }
  r.pd_max = 1.0 - normal_cdf(r.v_t - mu1) * normal_cdf(r.v_t - mu2);
  r.pd_linear = normal_sf(r.v_t - (r.a1 * mu1 + r.a2 * mu2));
  return r;
}

struct ProfilePoint {
  double mean_noise = 0.0;
  double mean_signal = 0.0;
};

/// Per-index mean of the level-i detail coefficients under H0 and H1 across
/// paired experiments (the H1 trial reuses the H0 noise realization).
inline std::vector<ProfilePoint> mean_coefficient_profile(
    const ExperimentConfig& cfg, int level, std::size_t n_experiments = 500,
    double snr_db = -5.0) {
  cfg.validate();
  if (n_experiments == 0)
    throw std::domain_error("mean_coefficient_profile: need >= 1 experiment");
  const WaveletFilter filter = make_wavelet(cfg.wavelet);
  const SampledSignal s_hat = gen_chirp(cfg.chirp);
  const std::size_t m = cfg.chirp.n_samples >> level;
  if (m == 0) throw std::domain_error("profile level too deep for n_samples");
  std::vector<ProfilePoint> acc(m);
  // serial accumulation keeps the floating-point sum order fixed
  for (std::uint64_t t = 0; t < n_experiments; ++t) {
    RandomStream stream = substream(cfg.master_seed, StreamPurpose::profile, t);
    const SampledSignal noise = gen_awgn(cfg.chirp.n_samples, cfg.sigma_n, stream);
    const SampledSignal obs =
        compose_observation(s_hat, noise, snr_db, cfg.sigma_n, Hypothesis::h1);
    const DetailCoefficients dn = analyze_level(noise, filter, level, cfg.mode);
    const DetailCoefficients ds = analyze_level(obs, filter, level, cfg.mode);
    for (std::size_t k = 0; k < m; ++k) {
      acc[k].mean_noise += dn.values[k];
      acc[k].mean_signal += ds.values[k];
    }
  }
  const double inv = 1.0 / static_cast<double>(n_experiments);
  for (auto& p : acc) {
    p.mean_noise *= inv;
    p.mean_signal *= inv;
  }
  return acc;
}

struct BenchRow {
  std::size_t input_len = 0;
  std::size_t filter_len = 0;
  std::uint64_t nanos = 0;
};

namespace detail {

template <class Fn>
std::uint64_t min_run_nanos(Fn&& fn) {
  using clock = std::chrono::steady_clock;
  fn();  // warm up
  std::uint64_t best = UINT64_MAX;
  std::uint64_t total = 0;
  int reps = 0;
  while ((total < 20'000'000ull && reps < 200) || reps < 3) {
    const auto t0 = clock::now();
    fn();
    const auto dt = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - t0)
            .count());
    best = std::min(best, dt);
    total += dt;
    ++reps;
  }
  return best;
}

}  // namespace detail

/// Wall time of one single-level analysis per (input length, filter order)
/// pair; minimum over repeated runs.
inline std::vector<BenchRow> scaling_benchmark(std::span<const std::size_t> sizes,
                                               std::span<const int> orders) {
  std::vector<BenchRow> rows;
  for (int order : orders) {
    const WaveletFilter f = make_daubechies(order);
    for (std::size_t size : sizes) {
      RandomStream stream = substream(0x42, StreamPurpose::benchmark, size);
      const SampledSignal x = gen_awgn(size, 1.0, stream);
      volatile double sink = 0.0;
      const std::uint64_t nanos = detail::min_run_nanos([&] {
        const DetailCoefficients d =
            analyze_level(x, f, 1, BoundaryMode::zero_pad);
        sink = sink + d.values[0];
      });
      rows.push_back(BenchRow{size, f.length(), nanos});
    }
  }
  return rows;
}

/// Least-squares slope of log(time) against log(input length) for one filter
/// length.
inline double fitted_exponent(std::span<const BenchRow> rows,
                              std::size_t filter_len) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double n = 0;
  for (const auto& r : rows) {
    if (r.filter_len != filter_len) continue;
    const double x = std::log(static_cast<double>(r.input_len));
    const double y = std::log(static_cast<double>(r.nanos));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1.0;
  }
  if (n < 2.0) throw std::domain_error("fitted_exponent needs >= 2 rows");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Transform cost vs linear-statistic cost at one size (nanoseconds).
inline std::pair<std::uint64_t, std::uint64_t> transform_vs_statistic_nanos(
    std::size_t size, int order) {
  const WaveletFilter f = make_daubechies(order);
  RandomStream stream = substream(0x42, StreamPurpose::benchmark, size + 1);
  const SampledSignal x = gen_awgn(size, 1.0, stream);
  const ScaleSet scales{std::vector<int>{1}};
  const ConcatDetails d = concat_details(x, f, scales, BoundaryMode::zero_pad);
  const CoefficientVector a = matched_coefficients(d);
  volatile double sink = 0.0;
  const std::uint64_t t_transform = detail::min_run_nanos([&] {
    const DetailCoefficients dd = analyze_level(x, f, 1, BoundaryMode::zero_pad);
    sink = sink + dd.values[0];
  });
  const std::uint64_t t_stat = detail::min_run_nanos([&] {
    sink = sink + linear_statistic(d, a);
  });
  return {t_transform, t_stat};
}

// ---- CSV emission (schemas are part of the external interface) ----

inline std::string sweep_csv(std::span<const PdCurve> curves) {
  std::string out = "detector,scales,snr_db,pd,ci_lo,ci_hi,pfa_target,trials,seed\n";
  for (const auto& c : curves) {
    const std::string label = scales_label(c.scales);
    for (const auto& p : c.points) {
      out += c.detector;
      out += ',';
      out += label;
      out += ',';
      out += format_double(p.snr_db);
      out += ',';
      out += format_double(p.pd);
      out += ',';
      out += format_double(p.ci.lo);
      out += ',';
      out += format_double(p.ci.hi);
      out += ',';
      out += format_double(c.pfa);
      out += ',';
      out += std::to_string(c.trials);
      out += ',';
      out += std::to_string(c.seed);
      out += '\n';
    }
  }
  return out;
}

inline std::string profile_csv(std::span<const ProfilePoint> points) {
  std::string out = "index,mean_noise,mean_signal\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(points[i].mean_noise);
    out += ',';
    out += format_double(points[i].mean_signal);
    out += '\n';
  }
  return out;
}

inline std::string bench_csv(std::span<const BenchRow> rows) {
  std::string out = "input_len,filter_len,nanos\n";
  for (const auto& r : rows) {
    out += std::to_string(r.input_len);
    out += ',';
    out += std::to_string(r.filter_len);
    out += ',';
    out += std::to_string(r.nanos);
    out += '\n';
  }
  return out;
}

}  // namespace wavedet
