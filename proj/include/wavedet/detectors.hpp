#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavedet/stats.hpp"
#include "wavedet/wavelet.hpp"

namespace wavedet {

/// Weight vector aligned with a ConcatDetails layout. Entries outside each
/// segment's steady range are identically zero; at least one steady entry
/// must be nonzero for the Gaussian threshold machinery to apply.
struct CoefficientVector {
  std::vector<double> weights;
  std::vector<SegmentInfo> segments;

  double active_norm2() const {
    double acc = 0.0;
    for (const auto& seg : segments)
      for (std::size_t k = 0; k < seg.steady_len; ++k) {
        const double w = weights[seg.offset + k];
        acc += w * w;
      }
    return acc;
  }

  void validate() const {
    std::size_t total = 0;
    for (const auto& seg : segments) total += seg.length;
    if (total != weights.size())
      throw std::domain_error("coefficient vector does not match its layout");
    for (const auto& seg : segments)
      for (std::size_t k = seg.steady_len; k < seg.length; ++k)
        if (weights[seg.offset + k] != 0.0)
          throw std::domain_error(
              "coefficient vector has nonzero weight outside steady range");
    if (active_norm2() == 0.0)
      throw std::domain_error("coefficient vector must have a nonzero component");
  }
};

/// Max-Abs over the whole detail vector, transient indices included.
inline double max_statistic(const DetailCoefficients& d) {
  double m = 0.0;
  for (double v : d.values) m = std::max(m, std::fabs(v));
  return m;
}

/// Weighted sum over steady indices; pre-steady entries contribute nothing.
inline double linear_statistic(const ConcatDetails& d,
                               const CoefficientVector& a) {
  if (!d.same_layout(a.segments))
    throw std::domain_error("linear_statistic: detail/coefficient layout mismatch");
  double acc = 0.0;
  for (const auto& seg : a.segments) {
    const double* dv = d.values.data() + seg.offset;
    const double* av = a.weights.data() + seg.offset;
    for (std::size_t k = 0; k < seg.steady_len; ++k) acc += dv[k] * av[k];
  }
  return acc;
}

/// Weights proportional to the clean pulse's steady detail coefficients,
/// normalized to unit energy. For a deterministic pulse this maximizes the
/// deflection eta/sigma, hence Pd at any fixed Pfa and SNR.
inline CoefficientVector matched_coefficients(const ConcatDetails& d_s) {
  CoefficientVector a;
  a.segments = d_s.segments;
  a.weights.assign(d_s.values.size(), 0.0);
  double norm2 = 0.0;
  for (const auto& seg : d_s.segments)
    for (std::size_t k = 0; k < seg.steady_len; ++k) {
      const double v = d_s.values[seg.offset + k];
      a.weights[seg.offset + k] = v;
      norm2 += v * v;
    }
  if (norm2 == 0.0)
    throw std::domain_error("matched_coefficients: clean pulse has no steady energy");
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& w : a.weights) w *= inv;
  return a;
}

/// sigma of the linear statistic: sigma_n * sqrt(sum of steady weights^2).
inline double analytic_sigma(const CoefficientVector& a, double sigma_n) {
  return sigma_n * std::sqrt(a.active_norm2());
}

/// Mean of the linear statistic under H1.
inline double analytic_eta1(const CoefficientVector& a, const ConcatDetails& d_s,
                            double snr_db, double sigma_n) {
  if (!d_s.same_layout(a.segments))
    throw std::domain_error("analytic_eta1: layout mismatch");
  double dot = 0.0;
  for (const auto& seg : a.segments) {
    const double* dv = d_s.values.data() + seg.offset;
    const double* av = a.weights.data() + seg.offset;
    for (std::size_t k = 0; k < seg.steady_len; ++k) dot += dv[k] * av[k];
  }
  return std::pow(10.0, snr_db / 20.0) * sigma_n * dot;
}

/// Threshold putting the H0 tail mass at pfa.
inline double analytic_threshold(const CoefficientVector& a, double sigma_n,
                                 double pfa) {
  if (!(pfa > 0.0 && pfa < 1.0))
    throw std::domain_error("analytic_threshold: pfa must be in (0,1)");
  return analytic_sigma(a, sigma_n) * normal_quantile(1.0 - pfa);
}

/// Detection is asserted on strict exceedance of the threshold.
inline bool decide(double statistic, double v_t) { return statistic > v_t; }

struct LinearDetectorModel {
  WaveletFilter filter;
  ScaleSet scales;
  BoundaryMode mode = BoundaryMode::zero_pad;
  CoefficientVector a;
  double sigma_n = 1.0;
  double pfa = 1e-3;
  double v_t = 0.0;

  // v_t must always equal the analytic threshold recomputed from the other
  // fields (to 1e-10 relative).
  void check_invariants() const {
    a.validate();
    if (!(sigma_n > 0.0))
      throw std::domain_error("linear model: sigma_n must be positive");
    const double want = analytic_threshold(a, sigma_n, pfa);
    const double scale = std::max(std::fabs(want), 1e-300);
    if (std::fabs(v_t - want) > 1e-10 * scale)
      throw std::domain_error("linear model: stored threshold is inconsistent");
  }
};

inline LinearDetectorModel make_linear_detector(WaveletFilter filter,
                                                ScaleSet scales,
                                                BoundaryMode mode,
                                                CoefficientVector a,
                                                double sigma_n, double pfa) {
  LinearDetectorModel m;
  m.filter = std::move(filter);
  m.scales = std::move(scales);
  m.mode = mode;
  m.a = std::move(a);
  m.sigma_n = sigma_n;
  m.pfa = pfa;
  m.v_t = analytic_threshold(m.a, sigma_n, pfa);
  m.check_invariants();
  return m;
}

/// Pd = Pr{statistic > v_t | H1} under the Gaussian model.
inline double analytic_pd(const LinearDetectorModel& model,
                          const ConcatDetails& d_s, double snr_db) {
  const double sigma = analytic_sigma(model.a, model.sigma_n);
  const double eta1 = analytic_eta1(model.a, d_s, snr_db, model.sigma_n);
  return normal_sf((model.v_t - eta1) / sigma);
}

struct MaxCalibrationInfo {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

struct MaxDetectorModel {
  WaveletFilter filter;
  int scale = 1;
  BoundaryMode mode = BoundaryMode::zero_pad;
  double v_t = 0.0;
  double pfa = 1e-3;
  MaxCalibrationInfo calibration;

  void check_invariants() const {
    if (v_t < 0.0)
      throw std::domain_error("max model: threshold on |d| cannot be negative");
  }
};

struct OptimizeResult {
  CoefficientVector coefficients;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Projected gradient ascent of the analytic Pd over the unit sphere of
/// steady-supported weight vectors. The closed-form optimum is the matched
/// vector; this routine exists to exercise the optimization route and must
/// land on the same direction.
inline OptimizeResult optimize_coefficients(const ConcatDetails& d_s, double pfa,
                                            double snr_db,
                                            const CoefficientVector& init,
                                            std::size_t budget) {
  if (!(pfa > 0.0 && pfa < 1.0))
    throw std::domain_error("optimize_coefficients: pfa must be in (0,1)");
  if (!d_s.same_layout(init.segments))
    throw std::domain_error("optimize_coefficients: layout mismatch");
  init.validate();
  if (std::fabs(init.active_norm2() - 1.0) > 1e-8)
    throw std::domain_error("optimize_coefficients: init must have unit norm");

  // Pd(a) = Q(z - gamma * <a, d_hat>) on the sphere, with gamma and the
  // steady direction d_hat fixed by the problem; sigma_n cancels.
  CoefficientVector dir = matched_coefficients(d_s);
  const double z = normal_quantile(1.0 - pfa);
  double steady_norm = 0.0;
  for (const auto& seg : d_s.segments)
    for (std::size_t k = 0; k < seg.steady_len; ++k) {
      const double v = d_s.values[seg.offset + k];
      steady_norm += v * v;
    }
  steady_norm = std::sqrt(steady_norm);
  const double gamma = std::pow(10.0, snr_db / 20.0) * steady_norm;

  const std::size_t n = init.weights.size();
  std::vector<double> a = init.weights;
  auto dot_dir = [&](const std::vector<double>& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += v[i] * dir.weights[i];
    return acc;
  };
  auto objective = [&](double cosine) { return normal_sf(z - gamma * cosine); };

  double cosine = dot_dir(a);
  double fval = objective(cosine);
  bool converged = false;
  std::size_t iter = 0;
  double step = 1.0;
  for (; iter < budget; ++iter) {
    // Euclidean gradient of Q(z - gamma c) wrt a is phi(z - gamma c) * gamma
    // * dir projected onto the tangent space at a. The positive pdf factor
    // only rescales the step, so it is folded into the line search (this
    // keeps the direction well-defined where the pdf underflows).
    double grad_norm2 = 0.0;
    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] = dir.weights[i] - cosine * a[i];
      grad_norm2 += grad[i] * grad[i];
    }
    if (1.0 - std::fabs(cosine) <= 1e-14 || grad_norm2 <= 1e-300) {
      converged = true;
      break;
    }
    // backtracking on the retraction a <- normalize(a + step * grad)
    bool improved = false;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<double> trial(n);
      double norm2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        trial[i] = a[i] + step * grad[i];
        norm2 += trial[i] * trial[i];
      }
      const double inv = 1.0 / std::sqrt(norm2);
      for (double& t : trial) t *= inv;
      const double c_trial = dot_dir(trial);
      const double f_trial = objective(c_trial);
      if (f_trial > fval || c_trial > cosine) {
        a = std::move(trial);
        cosine = c_trial;
        fval = f_trial;
        improved = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!improved) {
      converged = 1.0 - std::fabs(cosine) <= 1e-12;
      break;
    }
  }
  if (1.0 - std::fabs(cosine) <= 1e-12) converged = true;

  OptimizeResult res;
  res.coefficients.segments = init.segments;
  res.coefficients.weights = std::move(a);
  res.converged = converged;
  res.iterations = iter;
  return res;
}

}  // namespace wavedet
