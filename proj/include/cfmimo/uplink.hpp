// SPDX-License-Identifier: Apache-2.0
//
// Local combiners, Monte Carlo large-scale fading statistics and the dense and
// partial LSFD baselines.

#pragma once

#include <string>
#include <vector>

#include "cfmimo/association.hpp"
#include "cfmimo/geometry.hpp"
#include "cfmimo/pilots.hpp"

namespace cfmimo {

enum class CombinerKind { LMmse, MR };

std::string to_string(CombinerKind kind);
/// Accepts "L-MMSE" or "MR"; throws std::invalid_argument otherwise.
CombinerKind combiner_from_string(const std::string& name);

/// Unnormalized local combiners v̄_kl for one block of channel estimates.
class CombinerBuilder {
 public:
  CombinerBuilder(CombinerKind kind, const ChannelStatistics& stats, const EstimationStatistics& est, VecR p);

  CombinerKind kind() const { return kind_; }
  const VecR& powers() const { return p_; }

  /// hhat and out are indexed k * L + l.
  void build(const std::vector<VecC>& hhat, std::vector<VecC>& out) const;

 private:
  CombinerKind kind_;
  int K_, L_, N_;
  VecR p_;
  std::vector<MatC> c_;  // per AP: sum_i p_i (R_il - B_il) + sigma^2 I
};

inline constexpr int kDefaultMinBlocks = 2000;

/// Per-pair unit-power moments of the effective channels g_ki[l] = v_kl^H h_il.
struct LsfMoments {
  int K = 0;
  int L = 0;
  int n_mc = 0;
  std::vector<MatC> second;  // E{g_ki g_ki^H}, index k * K + i, L x L Hermitian
  std::vector<VecC> first;   // E{g_kk}, index k
  std::vector<double> combiner_power;  // sample mean of ||v_kl||^2, index k * L + l

  const MatC& M2(int k, int i) const { return second[static_cast<std::size_t>(k * K + i)]; }
};

/// One simulated coherence block with normalized combiners.
struct SimulatedBlock {
  ChannelRealization h;
  std::vector<VecC> hhat;
  std::vector<VecC> v;
};

/// Draws coherence blocks (channels, pilot estimates, combiners) for one drop
/// and accumulates the moments every LSFD/LSFP design consumes.
class MonteCarloEngine {
 public:
  MonteCarloEngine(const ChannelStatistics& stats, const PilotAssignment& assign, const EstimationStatistics& est,
                   CombinerKind kind, const VecR& p);

  /// First pass: estimates E{||v̄_kl||^2} over n_blocks and fixes the
  /// normalization v = v̄ / sqrt(E{||v̄||^2}) (v = 0 when the mean is 0).
  void calibrate(int n_blocks, Rng& rng);
  bool calibrated() const { return !scale_.empty(); }
  const std::vector<double>& scale() const { return scale_; }

  void draw_block(Rng& rng, SimulatedBlock& block) const;

  /// Throws std::invalid_argument when n_blocks < min_blocks.
  LsfMoments moments(int n_blocks, Rng& rng, int min_blocks = kDefaultMinBlocks) const;

  int K() const { return K_; }
  int L() const { return L_; }

 private:
  int K_, L_, N_;
  const PilotAssignment& assign_;
  const EstimationStatistics& est_;
  ChannelSampler sampler_;
  CombinerBuilder builder_;
  std::vector<double> scale_;
};

/// Δ_k and ξ_k of one drop for uplink powers p.
struct LsfStatistics {
  int K = 0;
  int L = 0;
  int n_mc = 0;
  double noise_var = 1.0;
  std::vector<MatC> delta;  // Σ_i p_i E{g_ki g_ki^H} + σ² I
  std::vector<VecC> xi;     // sqrt(p_k) E{g_kk}
};

LsfStatistics lsf_statistics(const LsfMoments& m, const VecR& p, double noise_var);

struct LsfdSolution {
  std::vector<VecC> a;  // per UE, length L
  Association assoc;
};

/// a_k = sqrt(p_k) Δ_k^{-1} ξ_k with every AP serving every UE.
LsfdSolution olsfd(const LsfStatistics& stats, const VecR& p);

struct SinrValue {
  double value = 0.0;
  bool flagged = false;  // zero weights or nonpositive interference term
};

inline constexpr double kSinrCap = 1e12;

SinrValue uplink_sinr(const VecC& a, const LsfStatistics& stats, int k);
double uplink_se(double sinr, int tau_u, int tau_c);
double uplink_mse(const VecC& a, const LsfStatistics& stats, int k, double p_k);

/// P_k = {i : M_i ∩ M_k ≠ ∅} for every UE.
std::vector<std::vector<int>> partial_interferers(const Association& assoc);

/// Partial LSFD: interference from P_k only. The solve runs on the M_k
/// principal sub-block unless `full_matrix`, which inverts the full L x L
/// matrix and then zeroes the entries outside M_k.
LsfdSolution plsfd(const LsfMoments& m, const VecR& p, double noise_var, const Association& assoc,
                   bool full_matrix = false);

/// Master AP (largest gain) per UE, plus, at every AP, the strongest UE of each pilot.
Association heuristic_dcc(const NetworkGeometry& geom, const PilotAssignment& assign);

}  // namespace cfmimo
