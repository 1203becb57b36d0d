#pragma once

#include <cstdint>

namespace lolo {

/// splitmix64: tiny deterministic generator with identical output on every
/// platform, used wherever reproducibility is part of the contract.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

  /// Uniform double in [0, 1).
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double range(double lo, double hi) { return lo + (hi - lo) * u01(); }

 private:
  std::uint64_t state_;
};

}  // namespace lolo
