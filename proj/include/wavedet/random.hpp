#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

namespace wavedet {

namespace detail {

// Philox 4x32-10 round function (Salmon et al., SC 2011).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    if (round < 9) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
  }
  return ctr;
}

}  // namespace detail

enum class StreamPurpose : std::uint64_t {
  max_calibration = 1,
  evaluation = 2,
  profile = 3,
  noise_stats = 4,
  benchmark = 5,
  false_alarm = 6,
};

/// Counter-based random stream. Output depends only on (master_seed,
/// stream_id, draw index), so trials keyed by distinct stream ids can run on
/// any number of workers in any order and still reproduce bit-identically.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : key_{static_cast<std::uint32_t>(master_seed),
             static_cast<std::uint32_t>(master_seed >> 32)},
        stream_lo_(static_cast<std::uint32_t>(stream_id)),
        stream_hi_(static_cast<std::uint32_t>(stream_id >> 32)) {}

  std::uint32_t next_u32() {
    if (avail_ == 0) {
      block_ = detail::philox4x32({static_cast<std::uint32_t>(counter_),
                                   static_cast<std::uint32_t>(counter_ >> 32),
                                   stream_lo_, stream_hi_},
                                  key_);
      ++counter_;
      avail_ = 4;
    }
    return block_[4 - avail_--];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform double in the open interval (0, 1).
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal draw (Marsaglia polar method; the spare deviate is
  /// cached, so draw parity within a stream is part of its state).
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_unit() - 1.0;
      v = 2.0 * next_unit() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double r = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * r;
    have_spare_ = true;
    return u * r;
  }

  void fill_gaussian(std::span<double> out, double sigma) {
    for (double& x : out) x = sigma * next_gaussian();
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  unsigned avail_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// One independent substream per (purpose, index) pair under a master seed.
inline RandomStream substream(std::uint64_t master_seed, StreamPurpose purpose,
                              std::uint64_t index) {
  const std::uint64_t id =
      (static_cast<std::uint64_t>(purpose) << 56) | (index & 0x00FFFFFFFFFFFFFFull);
  return RandomStream(master_seed, id);
}

}  // namespace wavedet
