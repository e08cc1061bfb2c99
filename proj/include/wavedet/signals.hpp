#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavedet/random.hpp"
#include "wavedet/wavelet.hpp"

namespace wavedet {

/// Linear frequency sweep. Frequencies are normalized (cycles per sample)
/// and must stay below Nyquist (0.5). Defaults place the sweep across the
/// level 3..6 detail bands of a 1024-sample frame.
struct ChirpSpec {
  std::size_t n_samples = 1024;
  double f0 = 0.006;
  double f1 = 0.130;
  double phase0 = 0.0;

  void validate() const {
    if (n_samples < 2 || !std::has_single_bit(n_samples))
      throw std::domain_error("chirp length must be a power of two >= 2");
    if (!(f0 > 0.0 && f0 < 0.5) || !(f1 > 0.0 && f1 < 0.5))
      throw std::domain_error("chirp frequencies must lie in (0, 0.5)");
    if (!std::isfinite(phase0))
      throw std::domain_error("chirp phase must be finite");
  }
};

enum class Hypothesis { h0, h1 };

struct ScenarioSpec {
  ChirpSpec chirp;
  double sigma_n = 1.0;
  double snr_db = 0.0;
  Hypothesis hypothesis = Hypothesis::h1;

  void validate() const {
    chirp.validate();
    if (!(sigma_n > 0.0))
      throw std::domain_error("noise deviation must be positive");
  }
};

/// Pulse amplitude used under H1: 10^(snr/20) * sigma_n.
inline double snr_amplitude(double snr_db, double sigma_n) {
  return std::pow(10.0, snr_db / 20.0) * sigma_n;
}

/// Cosine with instantaneous frequency f0 + (f1-f0)*t/(n-1), rescaled so the
/// mean square over the frame is exactly 1.
inline SampledSignal gen_chirp(const ChirpSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_samples;
  const double slope = (spec.f1 - spec.f0) / static_cast<double>(n - 1);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    const double phase =
        spec.phase0 + 2.0 * std::numbers::pi * (spec.f0 * t + 0.5 * slope * t * t);
    x[i] = std::cos(phase);
  }
  double sumsq = 0.0;
  for (double v : x) sumsq += v * v;
  const double scale = std::sqrt(static_cast<double>(n) / sumsq);
  for (double& v : x) v *= scale;
  return SampledSignal(std::move(x));
}

/// i.i.d. N(0, sigma_n^2) samples drawn from the given stream.
inline SampledSignal gen_awgn(std::size_t n, double sigma_n,
                              RandomStream& stream) {
  if (n == 0 || !std::has_single_bit(n))
    throw std::domain_error("noise length must be a power of two");
  if (!(sigma_n > 0.0))
    throw std::domain_error("noise deviation must be positive");
  std::vector<double> x(n);
  stream.fill_gaussian(x, sigma_n);
  return SampledSignal(std::move(x));
}

/// H0: the noise unchanged. H1: 10^(snr/20)*sigma_n * s_hat + noise, where
/// s_hat must be power-normalized (mean square 1).
inline SampledSignal compose_observation(const SampledSignal& s_hat,
                                         const SampledSignal& noise,
                                         double snr_db, double sigma_n,
                                         Hypothesis hyp) {
  if (s_hat.size() != noise.size())
    throw std::domain_error("signal/noise length mismatch: " +
                            std::to_string(s_hat.size()) + " vs " +
                            std::to_string(noise.size()));
  if (hyp == Hypothesis::h0) return noise;
  double sumsq = 0.0;
  for (double v : s_hat.samples) sumsq += v * v;
  if (std::fabs(sumsq / static_cast<double>(s_hat.size()) - 1.0) > 1e-6)
    throw std::domain_error("compose_observation: s_hat is not power-normalized");
  const double amp = snr_amplitude(snr_db, sigma_n);
  std::vector<double> out(noise.samples);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += amp * s_hat.samples[i];
  return SampledSignal(std::move(out));
}

}  // namespace wavedet
