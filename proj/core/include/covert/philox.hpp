#pragma once

// Philox4x32-10 counter-based generator. Output depends only on (key,
// counter), so any trial can be replayed without touching the others.

#include <array>
#include <cmath>
#include <cstdint>

namespace covert {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Independent random stream for one (seed, trial, substream) triple.
class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::uint64_t trial, std::uint32_t substream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        counter_{static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                 substream, 0u} {}

  std::uint64_t next_u64() {
    if (used_ >= 2) refill();
    const std::uint64_t v = (static_cast<std::uint64_t>(buffer_[2 * used_]) << 32) |
                            buffer_[2 * used_ + 1];
    ++used_;
    return v;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Unit-mean exponential by inversion.
  double exponential() { return -std::log1p(-uniform()); }

  bool coin() { return (next_u64() >> 63) != 0; }

 private:
  void refill() {
    buffer_ = Philox4x32::block(counter_, key_);
    ++counter_[3];
    used_ = 0;
  }

  Philox4x32::Key key_;
  Philox4x32::Counter counter_;
  Philox4x32::Counter buffer_{};
  int used_ = 2;
};

}  // namespace covert
