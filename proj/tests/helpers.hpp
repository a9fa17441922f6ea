// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures for the unit and acceptance tests.

#pragma once

#include <cmath>
#include <vector>

#include "cfmimo/linalg.hpp"
#include "cfmimo/power_control.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/uplink.hpp"

namespace cfmimo::testing {

/// Random Hermitian positive-definite matrix with eigenvalues in [lo, hi].
inline MatC random_pd(int n, Rng& rng, double lo = 0.5, double hi = 5.0) {
  MatC z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<MatC> qr(z);
  const MatC q = qr.householderQ();
  VecR ev(n);
  for (int i = 0; i < n; ++i) ev[i] = rng.uniform(lo, hi);
  return q * ev.cast<cplx>().asDiagonal() * q.adjoint();
}

inline VecC random_vec(int n, Rng& rng) { return rng.complex_normal(n); }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double rel_diff(const VecC& a, const VecC& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

inline double rel_diff(const VecR& a, const VecR& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

/// |<a, b>| / (||a|| ||b||); equals 1 for collinear vectors.
inline double alignment(const VecC& a, const VecC& b) { return std::abs(a.dot(b)) / (a.norm() * b.norm()); }

/// A small simulated network with Monte Carlo moments from L-MMSE combining.
struct SimulatedNetwork {
  NetworkGeometry geometry;
  ChannelStatistics stats;
  PilotAssignment pilots;
  VecR p;
  LsfMoments moments;
};

inline SimulatedNetwork simulate_network(int L, int K, int N, int tau_p, int n_mc, std::uint64_t seed) {
  NetworkConfig c;
  c.num_aps = L;
  c.num_ues = K;
  c.antennas_per_ap = N;
  c.area_side_m = 300.0;
  Rng rng(seed);
  SimulatedNetwork s;
  s.geometry = drop_network(c, rng);
  s.stats = correlation_matrices(s.geometry, c);
  s.pilots = assign_pilots(s.geometry, tau_p);
  const auto est = estimation_stats(s.stats, s.pilots, 0.1, 1.0);
  std::vector<std::vector<int>> all(static_cast<std::size_t>(K));
  for (auto& m : all)
    for (int l = 0; l < L; ++l) m.push_back(l);
  s.p = fractional_power_control(s.geometry.beta, all, 0.5, 0.1);
  MonteCarloEngine engine(s.stats, s.pilots, est, CombinerKind::LMmse, s.p);
  engine.calibrate(n_mc, rng);
  s.moments = engine.moments(n_mc, rng, std::min(n_mc, 100));
  return s;
}

}  // namespace cfmimo::testing
