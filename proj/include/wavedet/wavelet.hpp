#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavedet/daubechies_tables.hpp"

namespace wavedet {

enum class BoundaryMode { zero_pad, periodic };

inline std::string to_string(BoundaryMode mode) {
  return mode == BoundaryMode::zero_pad ? "zero-pad" : "periodic";
}

inline BoundaryMode boundary_mode_from_string(const std::string& s) {
  if (s == "zero-pad") return BoundaryMode::zero_pad;
  if (s == "periodic") return BoundaryMode::periodic;
  throw std::domain_error("unknown boundary mode: " + s);
}

/// Orthonormal analysis filter pair. h is the low-pass (scaling) filter,
/// g the high-pass derived by the quadrature-mirror relation
/// g[n] = (-1)^n h[L-1-n]. Both have unit energy and sum(h) = sqrt(2).
struct WaveletFilter {
  std::string name;
  std::vector<double> h;
  std::vector<double> g;

  std::size_t length() const { return h.size(); }

  // Number of trailing outputs of one zero-padded analysis stage whose
  // filter window extends past the end of the input: ceil(L/2) - 1.
  std::size_t transient_len() const { return (h.size() + 1) / 2 - 1; }
};

/// Builds the order-p Daubechies analysis pair (filter length L = 2p).
inline WaveletFilter make_daubechies(int order) {
  if (order < 1 || order > detail::kMaxDaubechiesOrder)
    throw std::domain_error("Daubechies order must be in [1, 10], got " +
                            std::to_string(order));
  std::span<const double> taps = detail::kDaubechiesLowPass[order - 1];
  WaveletFilter f;
  f.name = "db" + std::to_string(order);
  f.h.assign(taps.begin(), taps.end());
  const std::size_t L = f.h.size();
  f.g.resize(L);
  for (std::size_t n = 0; n < L; ++n) {
    const double v = f.h[L - 1 - n];
    f.g[n] = (n % 2 == 0) ? v : -v;
  }
  return f;
}

inline WaveletFilter make_wavelet(const std::string& name) {
  if (name.size() < 3 || name.substr(0, 2) != "db")
    throw std::domain_error("unknown wavelet family: " + name);
  int order = 0;
  try {
    order = std::stoi(name.substr(2));
  } catch (const std::exception&) {
    throw std::domain_error("unknown wavelet: " + name);
  }
  return make_daubechies(order);
}

/// Real signal whose length is a power of two (2^N samples, N >= 0).
struct SampledSignal {
  std::vector<double> samples;

  explicit SampledSignal(std::vector<double> s) : samples(std::move(s)) {
    if (samples.empty() || !std::has_single_bit(samples.size()))
      throw std::domain_error("signal length must be a power of two, got " +
                              std::to_string(samples.size()));
  }

  std::size_t size() const { return samples.size(); }
  int log2_size() const { return std::countr_zero(samples.size()); }
};

/// Level-i detail vector. values[k] = sum_n g[n] x_{i-1}[2k+n] where x_{i-1}
/// is the (i-1)-times low-pass-decimated input. Under zero padding the
/// trailing ceil(L/2)-1 outputs fall in the filter transient (their windows
/// run past the input), so only the leading steady_len coefficients carry
/// full-variance steady-state statistics; periodic mode has no transient.
struct DetailCoefficients {
  int level = 0;
  std::vector<double> values;
  std::size_t steady_len = 0;
  BoundaryMode mode = BoundaryMode::zero_pad;
};

namespace detail {

// One analysis stage: out[k] = sum_n f[n] x[2k+n], output length |x|/2.
inline std::vector<double> filter_decimate(std::span<const double> x,
                                           std::span<const double> f,
                                           BoundaryMode mode) {
  const std::size_t n = x.size();
  const std::size_t L = f.size();
  const std::size_t m = n / 2;
  std::vector<double> out(m);
  if (mode == BoundaryMode::periodic) {
    for (std::size_t k = 0; k < m; ++k) {
      double acc = 0.0;
      std::size_t base = 2 * k;
      for (std::size_t t = 0; t < L; ++t) {
        std::size_t j = base + t;
        if (j >= n) j %= n;
        acc += f[t] * x[j];
      }
      out[k] = acc;
    }
  } else {
    // zero padding: taps beyond the end contribute nothing
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t base = 2 * k;
      const std::size_t lim = std::min(L, n - base);
      double acc = 0.0;
      for (std::size_t t = 0; t < lim; ++t) acc += f[t] * x[base + t];
      out[k] = acc;
    }
  }
  return out;
}

inline std::size_t steady_length(std::size_t m, const WaveletFilter& f,
                                 BoundaryMode mode) {
  if (mode == BoundaryMode::periodic) return m;
  const std::size_t t = f.transient_len();
  return m > t ? m - t : 0;
}

}  // namespace detail

/// Detail vectors for each requested level, sharing one low-pass cascade.
/// Levels may be in any order; each must be in [1, N] for input length 2^N.
inline std::vector<DetailCoefficients> analyze_levels(
    const SampledSignal& x, const WaveletFilter& f, std::span<const int> levels,
    BoundaryMode mode) {
  const int n_levels = x.log2_size();
  int deepest = 0;
  for (int lv : levels) {
    if (lv < 1 || lv > n_levels)
      throw std::domain_error("decomposition level " + std::to_string(lv) +
                              " out of range [1, " + std::to_string(n_levels) +
                              "]");
    deepest = std::max(deepest, lv);
  }
  std::vector<DetailCoefficients> out(levels.size());
  std::vector<double> approx = x.samples;
  for (int stage = 1; stage <= deepest; ++stage) {
    for (std::size_t idx = 0; idx < levels.size(); ++idx) {
      if (levels[idx] == stage) {
        DetailCoefficients d;
        d.level = stage;
        d.values = detail::filter_decimate(approx, f.g, mode);
        d.steady_len = detail::steady_length(d.values.size(), f, mode);
        d.mode = mode;
        out[idx] = std::move(d);
      }
    }
    if (stage < deepest) approx = detail::filter_decimate(approx, f.h, mode);
  }
  return out;
}

/// Detail coefficients at a single level: (level-1) low-pass stages followed
/// by one high-pass stage, all decimated by two. Output length 2^(N-level).
inline DetailCoefficients analyze_level(const SampledSignal& x,
                                        const WaveletFilter& f, int level,
                                        BoundaryMode mode) {
  const int lv[] = {level};
  return std::move(analyze_levels(x, f, lv, mode).front());
}

/// One full analysis stage (approximation + detail), used by the energy
/// conservation checks.
inline std::pair<std::vector<double>, std::vector<double>> analyze_stage(
    const SampledSignal& x, const WaveletFilter& f, BoundaryMode mode) {
  return {detail::filter_decimate(x.samples, f.h, mode),
          detail::filter_decimate(x.samples, f.g, mode)};
}

/// Ordered set of decomposition levels making up a multiscale vector.
struct ScaleSet {
  std::vector<int> levels;

  ScaleSet() = default;
  explicit ScaleSet(std::vector<int> lv) : levels(std::move(lv)) { validate(); }

  void validate() const {
    if (levels.empty()) throw std::domain_error("scale set must be nonempty");
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (levels[i] < 1)
        throw std::domain_error("scale levels must be >= 1");
      for (std::size_t j = i + 1; j < levels.size(); ++j)
        if (levels[i] == levels[j])
          throw std::domain_error("duplicate scale level " +
                                  std::to_string(levels[i]));
    }
  }

  bool operator==(const ScaleSet&) const = default;
};

/// Placement of one per-scale segment inside a concatenated detail vector.
/// Weights and sums that require steady-state statistics use only the
/// leading steady_len entries of each segment.
struct SegmentInfo {
  int level = 0;
  std::size_t offset = 0;
  std::size_t length = 0;
  std::size_t steady_len = 0;

  bool operator==(const SegmentInfo&) const = default;
};

/// Detail vectors of several scales laid out back to back, with per-segment
/// boundaries and steady ranges preserved.
struct ConcatDetails {
  std::vector<double> values;
  std::vector<SegmentInfo> segments;

  bool same_layout(const std::vector<SegmentInfo>& other) const {
    return segments == other;
  }
};

inline ConcatDetails concat_details(const SampledSignal& x,
                                    const WaveletFilter& f, const ScaleSet& b,
                                    BoundaryMode mode) {
  b.validate();
  auto per_level = analyze_levels(x, f, b.levels, mode);
  ConcatDetails out;
  std::size_t total = 0;
  for (const auto& d : per_level) total += d.values.size();
  out.values.reserve(total);
  out.segments.reserve(per_level.size());
  for (auto& d : per_level) {
    SegmentInfo seg;
    seg.level = d.level;
    seg.offset = out.values.size();
    seg.length = d.values.size();
    seg.steady_len = d.steady_len;
    out.segments.push_back(seg);
    out.values.insert(out.values.end(), d.values.begin(), d.values.end());
  }
  return out;
}

}  // namespace wavedet
