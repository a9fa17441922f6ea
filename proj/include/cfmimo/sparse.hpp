// SPDX-License-Identifier: Apache-2.0
//
// Sparsity-inducing MSE minimization over the real embedding of the LSFD
// weights: element-wise l1 (accelerated proximal gradient per UE) and
// composite l1 + group l2 over AP groups (block coordinate descent), warm
// restart over a decreasing lambda sequence, and a slow reference solver.
//
// Real layout (UE-major): block k occupies [k*2L, (k+1)*2L) and holds
// [Re a_k; Im a_k]. Group l gathers coordinates k*2L + l and k*2L + L + l of
// every UE k.
//
// Objective: a^T Δ a - 2 a^T ξ + λ ||a||_1 + γ Σ_l ||x_l||_2, where the
// embedded ξ of UE k already carries the sqrt(p_k) factor.

#pragma once

#include <functional>
#include <vector>

#include "cfmimo/association.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/uplink.hpp"

namespace cfmimo {

struct RealEmbedding {
  int K = 0;
  int L = 0;
  std::vector<MatR> delta;  // per UE, 2L x 2L symmetric
  std::vector<VecR> xi;     // per UE, sqrt(p_k) [Re ξ_k; Im ξ_k]

  int dim() const { return 2 * K * L; }
};

MatR embed_matrix(const MatC& m);
VecR embed_vector(const VecC& v);
VecC unembed_vector(const VecR& v);

RealEmbedding embed(const std::vector<MatC>& delta, const std::vector<VecC>& xi, const VecR& p);
RealEmbedding embed(const LsfStatistics& stats, const VecR& p);

/// Stacks per-UE complex weights into the UE-major real vector.
VecR embed_weights(const std::vector<VecC>& a);
std::vector<VecC> unembed_weights(const VecR& a_r, int K, int L);

/// The 2K real coordinates of AP group l.
std::vector<int> group_indices(int K, int L, int l);

VecR prox_l1(const VecR& u, double t);
VecR prox_l2(const VecR& u, double t);
/// prox of t_l2 ||.||_2 + t_l1 ||.||_1: l2 shrink applied after soft thresholding.
VecR prox_composite(const VecR& u, double t_l1, double t_l2);

struct SparsityPenalty {
  double lambda = 0.0;
  double gamma = 0.0;
};

/// Full objective including both penalties.
double sparse_objective(const RealEmbedding& emb, const VecR& a_r, const SparsityPenalty& pen);

/// Unpenalized minimizer Δ^{-1} ξ (the embedded dense LSFD weights).
VecR unpenalized_solution(const RealEmbedding& emb);

struct SolverConfig {
  double step_mu = 0.0;  // 0 selects 1 / Lipschitz automatically
  int n_max = 10000;     // iterations per UE (EW), sweeps (GW)
  int inner_max = 1000;  // inner iterations per group visit (GW)
  double tol = 1e-10;    // relative objective change
  double eta = 0.5;      // warm-restart shrink factor
  double lambda_bar_factor = 10.0;
  bool record_trace = true;
};

struct SparseSolution {
  VecR a_r;
  std::vector<VecC> a;
  double objective = 0.0;
  std::vector<double> trace;  // objective after each lock-step iteration (EW) or sweep (GW)
  long iterations = 0;        // total proximal steps (summed over UEs / groups)
  int outer = 0;              // lock-step iterations (EW) or sweeps (GW)
  int restarts = 0;           // momentum resets
  int backtracks = 0;
  bool converged = false;
  std::vector<double> stage_lambdas;   // warm restart only
  std::vector<long> stage_iterations;  // warm restart only
};

SparseSolution solve_ew(const RealEmbedding& emb, double lambda, const SolverConfig& cfg, const VecR* init = nullptr);
SparseSolution solve_gw(const RealEmbedding& emb, double lambda, double gamma, const SolverConfig& cfg,
                        const VecR* init = nullptr);

using SparseSolveFn = std::function<SparseSolution(double lambda, const VecR& init)>;

/// Solves at λ' = λ̄, max(η λ', λ), ... down to λ, seeding every stage with
/// the previous solution; the first stage starts from `init`.
SparseSolution warm_restart(const SparseSolveFn& solve, double lambda, double lambda_bar, double eta, const VecR& init);
SparseSolution warm_restart_ew(const RealEmbedding& emb, double lambda, const SolverConfig& cfg);
SparseSolution warm_restart_gw(const RealEmbedding& emb, double lambda, double gamma, const SolverConfig& cfg);

/// Plain proximal gradient over the full vector with step 1/Lipschitz,
/// halving the step whenever the objective rises, and a budget of
/// 100 * n_max iterations.
SparseSolution reference_oracle(const RealEmbedding& emb, double lambda, double gamma, const SolverConfig& cfg = {});

/// Exhaustive coarse-to-fine grid minimization; only for dim() <= 4.
VecR grid_oracle(const RealEmbedding& emb, double lambda, double gamma, int points_per_axis = 21,
                 double resolution = 1e-7);

struct ExtractedAssociation {
  Association assoc;
  std::vector<VecC> a;            // weights, with fallback weights filled in
  std::vector<int> fallback_ues;  // UEs whose serving set was empty
};

/// M_k = {l : a_kl != 0} with exact zeros. A UE left without APs keeps the AP
/// with the largest |a_kl| in `reference` and gets the single-AP MSE-optimal weight.
ExtractedAssociation extract_association(const std::vector<VecC>& a, const RealEmbedding& emb,
                                         const std::vector<VecC>& reference);

/// Synthetic LSF statistics with a pathloss-like spread of per-AP gains and
/// condition numbers in the low hundreds.
struct RandomInstance {
  LsfStatistics stats;
  VecR p;
};
RandomInstance random_instance(int K, int L, Rng& rng);

}  // namespace cfmimo
