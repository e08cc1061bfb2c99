#pragma once

// Wavelet-domain known-signal detection: Daubechies filter banks, chirp and
// noise scenario generation, max/linear detection statistics with analytic
// thresholds, and a seeded Monte Carlo comparison harness.

#include "wavedet/wavelet.hpp"
#include "wavedet/signals.hpp"
#include "wavedet/stats.hpp"
#include "wavedet/random.hpp"
#include "wavedet/detectors.hpp"
#include "wavedet/experiment.hpp"
#include "wavedet/csv.hpp"
#include "wavedet/svg.hpp"
