// SPDX-License-Identifier: Apache-2.0

#include "cfmimo/rng.hpp"

#include <cmath>

namespace cfmimo {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ (index * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

cplx Rng::complex_normal() {
  static const double kScale = std::sqrt(0.5);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {kScale * re, kScale * im};
}

VecC Rng::complex_normal(int n) {
  VecC z(n);
  for (int i = 0; i < n; ++i) z[i] = complex_normal();
  return z;
}

}  // namespace cfmimo
