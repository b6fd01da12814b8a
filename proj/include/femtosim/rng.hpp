#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace femtosim {

// Seeded random source used everywhere randomness is needed. std::mt19937_64
// is fully specified by the standard and the derived draws below avoid the
// implementation-defined std::*_distribution classes, so a given seed yields
// the same stream on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // uniform in [0, 1)
  double uniform() {
    return (engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [lo, hi] via rejection-free modulo on a 53-bit draw;
  // ranges here are tiny so the bias is far below anything observable
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; draws two uniforms per call, no cached spare
  double gaussian(double mean, double sigma) {
    double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    double u2 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + sigma * z;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace femtosim
