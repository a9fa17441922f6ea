// SPDX-License-Identifier: Apache-2.0
//
// Network power consumption and energy efficiency.

#pragma once

#include "cfmimo/association.hpp"
#include "cfmimo/linalg.hpp"

#include "json.hpp"

namespace cfmimo {

struct PowerModelParams {
  double cpu_fixed_w = 5.0;          // P_cpu^fix
  double fronthaul_fixed_w = 0.825;  // P_l^fix
  double ue_circuit_w = 0.1;         // P_k^c,ue
  double ap_circuit_w = 0.2;         // P_l^c,ap, per antenna
  double signaling_w = 0.01;         // P_l^sig, per served UE
  double processing_w = 0.8;         // P_l^pro, per antenna and served UE
  double decoding_w_per_gbps = 0.8;  // P_cpu^dec
  double encoding_w_per_gbps = 0.1;  // P_cpu^cod
  double eta_ue = 0.4;
  double eta_ap = 0.4;
  double bandwidth_hz = 20e6;
  double pilot_power_w = 0.1;
  int tau_c = 200;
  int tau_p = 10;
  int tau_u = 190;
  int tau_d = 0;
  bool ap_sleep = true;  // APs serving nobody draw no AP or fronthaul power

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
};

struct PowerBreakdown {
  VecR ue;         // per UE
  VecR ap;         // per AP
  VecR fronthaul;  // per AP link
  double cpu = 0.0;
  double total = 0.0;
};

/// rho_kl: K x L downlink powers; p: uplink data powers; se_*: per-UE SE in bit/s/Hz.
PowerBreakdown power_total(const PowerModelParams& params, int antennas_per_ap, const Association& assoc,
                           const MatR& rho_kl, const VecR& p, const VecR& se_ul, const VecR& se_dl);

/// bit/Joule.
double energy_efficiency(const VecR& se_ul, const VecR& se_dl, double total_power_w, double bandwidth_hz);

nlohmann::json to_json(const PowerBreakdown& pb);

}  // namespace cfmimo
