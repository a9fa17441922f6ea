// SPDX-License-Identifier: Apache-2.0
//
// Downlink precoding by duality with the uplink combiners, LSFP vector
// construction for the downlink scheme catalog, and downlink SINR/SE.
//
// The downlink effective channels g_ik[l] = w_il^H h_kl with w = v are the
// same Monte Carlo objects as the uplink ones, so downlink quantities are read
// from LsfMoments: E{g_ik g_ik^H} = M2(i, k) and E{g_kk} = first[k].

#pragma once

#include <string>
#include <vector>

#include "cfmimo/association.hpp"
#include "cfmimo/uplink.hpp"

namespace cfmimo {

/// Local precoders mirror the normalized local combiners.
inline const VecC& precoder_from_combiner(const VecC& v) { return v; }

struct DownlinkPowerParams {
  double rho_max = 1.0;    // per-AP power budget, W
  double nu = 0.5;         // distributed allocation exponent
  double vartheta = 0.2;   // gain reshaping exponent of the centralized allocation
  double kappa = -0.4;     // centralized allocation behavior
  double power_mu = 0.5;   // centralized allocation UE-ratio exponent
};

struct LsfpSolution {
  std::vector<VecC> b;      // b_k = sqrt(rho_k) omega_k
  VecR rho;                 // total power per UE
  std::vector<VecC> omega;  // unit-norm directions
  Association assoc;

  /// rho_kl = rho_k |omega_kl|^2, K x L.
  MatR per_ap_power() const;
};

std::vector<SinrValue> downlink_sinr(const std::vector<VecC>& b, const LsfMoments& m, double noise_var);
double downlink_se(double sinr, int tau_d, int tau_c);

struct DualityResult {
  VecR rho;
  VecR target;            // virtual uplink SINR of every UE
  bool feasible = true;   // false when the balance system had a negative solution
};

/// Downlink powers that reproduce the virtual uplink SINRs of the unit-norm
/// directions `a_tilde` (uplink powers p) with b_k = sqrt(rho_k) a_tilde_k.
DualityResult duality_power_allocation(const std::vector<VecC>& a_tilde, const LsfMoments& m, const VecR& p,
                                       double noise_var);

/// Scalable centralized allocation satisfying the per-AP budget for given
/// unit-norm directions; throws on an empty serving set.
VecR centralized_power_allocation(const MatR& beta, const std::vector<VecC>& omega, const Association& assoc,
                                  const DownlinkPowerParams& params);

/// Distributed allocation rho_kl (K x L): every active AP splits rho_max over
/// its served UEs in proportion to beta^nu.
MatR distributed_fpa(const MatR& beta, const Association& assoc, double nu, double rho_max);

/// Normalizes the directions and pairs them with the given powers.
LsfpSolution make_lsfp(std::vector<VecC> directions, const VecR& rho, Association assoc);

/// Largest per-AP load sum_k rho_k |omega_kl|^2 minus rho_max (<= 0 when the budget holds).
double per_ap_excess(const LsfpSolution& sol, double rho_max);

LsfpSolution fpa_scheme(const MatR& beta, const Association& assoc, const DownlinkPowerParams& params);
LsfpSolution hfpa_scheme(const MatR& beta, const Association& assoc, const DownlinkPowerParams& params);
LsfpSolution vlsfp_scheme(const LsfStatistics& stats, const MatR& beta, const DownlinkPowerParams& params);
/// Partial virtual LSFD with unit powers: (sum_{i in P_k} M2(k,i) + sigma^2 I)^{-1} E{g_kk} on the M_k sub-block.
LsfpSolution plsfp_scheme(const LsfMoments& m, double noise_var, const MatR& beta, const Association& assoc,
                          const DownlinkPowerParams& params);
/// Sparse directions taken directly from a sparse virtual LSFD solution.
LsfpSolution slsfp_scheme(const std::vector<VecC>& sparse_a, const Association& assoc, const MatR& beta,
                          const DownlinkPowerParams& params);
/// Virtual LSFD re-optimized on a given support: Δ_k[M,M]^{-1} ξ_k[M].
LsfpSolution svlsfp_scheme(const LsfStatistics& stats, const Association& assoc, const MatR& beta,
                           const DownlinkPowerParams& params);

enum class DownlinkScheme { FPA, HFPA, VLSFP, PLSFP, SLSFP, SVLSFP };
std::string to_string(DownlinkScheme s);
DownlinkScheme downlink_scheme_from_string(const std::string& name);

}  // namespace cfmimo
