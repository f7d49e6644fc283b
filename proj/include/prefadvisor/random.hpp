#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>

namespace prefadvisor {

/// Seeded generator with platform-independent derived draws.
///
/// The standard distributions are implementation-defined, so model files
/// would differ between standard libraries for the same seed. The helpers
/// here only depend on the mt19937_64 output sequence, which is fixed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform in [0, bound), bound > 0. Lemire-style rejection keeps it unbiased.
  std::size_t below(std::size_t bound) {
    const std::uint64_t range = bound;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t draw = engine_();
    while (draw >= limit) draw = engine_();
    return static_cast<std::size_t>(draw % range);
  }

  template <typename It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::size_t>(last - first);
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = below(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace prefadvisor
