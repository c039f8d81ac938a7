#pragma once

#include <cstdint>
#include <numbers>

namespace poq {

// SplitMix64, fixed here as generator "splitmix64-v1".
//
// Counter-based: the i-th output of a stream seeded with s is
// mix64(s + (i+1)*kGamma), so a stream is a pure function of (seed, index)
// and replays bit-exactly on any platform. Experiment records that carry a
// seed refer to this generator.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t next() { return mix64(state_ += kGamma); }

  // Uniform on [0, 1) using the top 53 bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on [0, 2*pi); the product stays strictly below 2*pi.
  double next_angle() { return next_unit() * (2.0 * std::numbers::pi); }

 private:
  std::uint64_t state_;
};

// Deterministic substream seed for (master seed, index) pairs, e.g. one
// independent stream per Monte Carlo trial.
constexpr std::uint64_t fold_in(std::uint64_t key, std::uint64_t index) {
  return SplitMix64::mix64(key ^ SplitMix64::mix64(index + SplitMix64::kGamma));
}

}  // namespace poq
