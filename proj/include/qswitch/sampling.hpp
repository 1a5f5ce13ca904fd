#pragma once

// Seeded random draws of qubit parameters for property sweeps.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "qswitch/channels.hpp"

namespace qswitch {

class ParamSampler {
 public:
  explicit ParamSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  double probability() { return uniform(); }
  double phase() { return uniform(0.0, 2.0 * std::numbers::pi); }

  Vec3 unit_vector() {
    std::normal_distribution<double> g;
    for (;;) {
      const Vec3 v{g(rng_), g(rng_), g(rng_)};
      const double n = v.norm();
      if (n > 1e-6) return v.scaled(1.0 / n);
    }
  }

  // Uniform direction, radius uniform in [0, 1].
  BlochVector bloch() { return unit_vector().scaled(uniform()); }

  PauliAxis pauli_axis() {
    switch (std::uniform_int_distribution<int>(0, 2)(rng_)) {
      case 0: return PauliAxis::x;
      case 1: return PauliAxis::y;
      default: return PauliAxis::z;
    }
  }

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace qswitch
