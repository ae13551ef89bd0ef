#pragma once

#include <cstdint>
#include <random>

namespace cmol {

/// Portable random stream.  std::mt19937_64 output is fixed by the standard;
/// the standard distributions are not, so conversions are done here.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = engine_();
    while (x >= limit)
      x = engine_();
    return x % bound;
  }

  bool coin(double p_true = 0.5) { return uniform() < p_true; }

private:
  std::mt19937_64 engine_;
};

} // namespace cmol
