// SPDX-License-Identifier: Apache-2.0
//
// Seeded random streams. Every stochastic quantity in the simulator is drawn
// from an explicitly passed Rng so identical seeds reproduce bit-identical
// results regardless of how work is spread over threads.

#pragma once

#include <cstdint>
#include <random>

#include "cfmimo/linalg.hpp"

namespace cfmimo {

/// SplitMix64 finalizer; used to derive independent sub-stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed of sub-stream `index` of `master` (per drop, per phase, ...).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return normal_(engine_); }
  /// CN(0, 1): real and imaginary parts each N(0, 1/2).
  cplx complex_normal();
  /// n i.i.d. CN(0, 1) entries.
  VecC complex_normal(int n);
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace cfmimo
