#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavedet {

inline double normal_pdf(double x) {
  constexpr double kInvSqrt2Pi = 0.39894228040143268;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

/// Standard normal CDF.
inline double normal_cdf(double x) {
  constexpr double kInvSqrt2 = 0.70710678118654752;
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

/// Standard normal survival function 1 - Phi(x), accurate in the upper tail.
inline double normal_sf(double x) {
  constexpr double kInvSqrt2 = 0.70710678118654752;
  return 0.5 * std::erfc(x * kInvSqrt2);
}

/// Inverse standard normal CDF. Rational approximation (Acklam) refined by
/// one Newton step on normal_cdf, giving |Phi(result) - p| well below 1e-10.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("normal_quantile requires p in (0,1), got " +
                            std::to_string(p));
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double pdf = normal_pdf(x);
  if (pdf > 0.0) x -= (normal_cdf(x) - p) / pdf;
  return x;
}

/// The ceil(q*n)-th order statistic (1-based), so the fraction of samples
/// strictly above the result is at most 1-q.
inline double empirical_quantile(std::span<const double> samples, double q) {
  if (samples.empty())
    throw std::domain_error("empirical_quantile on empty sample set");
  const double n = static_cast<double>(samples.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  rank = std::clamp<std::size_t>(rank, 1, samples.size());
  std::vector<double> work(samples.begin(), samples.end());
  std::nth_element(work.begin(), work.begin() + (rank - 1), work.end());
  return work[rank - 1];
}

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 1.0;
  double level = 0.95;

  bool contains(double p) const { return lo <= p && p <= hi; }
};

/// Wilson score interval for a binomial proportion.
inline ConfidenceInterval binomial_ci(std::uint64_t successes,
                                      std::uint64_t trials, double level) {
  if (trials == 0) throw std::domain_error("binomial_ci requires trials >= 1");
  if (successes > trials)
    throw std::domain_error("binomial_ci: successes exceed trials");
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("binomial_ci: level must be in (0,1)");
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double n = static_cast<double>(trials);
  const double p_hat = static_cast<double>(successes) / n;
  const double z2n = z * z / n;
  const double denom = 1.0 + z2n;
  const double center = (p_hat + 0.5 * z2n) / denom;
  const double half =
      (z / denom) * std::sqrt(p_hat * (1.0 - p_hat) / n + 0.25 * z2n / n);
  ConfidenceInterval ci;
  // the score endpoints for the degenerate counts are exactly 0 and 1
  ci.lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  ci.hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  ci.level = level;
  return ci;
}

}  // namespace wavedet
