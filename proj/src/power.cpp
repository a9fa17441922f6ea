// SPDX-License-Identifier: Apache-2.0

#include "cfmimo/power.hpp"

#include <stdexcept>

namespace cfmimo {

void PowerModelParams::validate() const {
  const double values[] = {cpu_fixed_w,  fronthaul_fixed_w,   ue_circuit_w,        ap_circuit_w, signaling_w,
                           processing_w, decoding_w_per_gbps, encoding_w_per_gbps, bandwidth_hz, pilot_power_w};
  for (double v : values)
    if (v < 0.0) throw std::invalid_argument("power model parameters must be nonnegative");
  if (!(eta_ue > 0.0 && eta_ue <= 1.0) || !(eta_ap > 0.0 && eta_ap <= 1.0))
    throw std::invalid_argument("amplifier efficiencies must lie in (0, 1]");
  if (tau_p < 0 || tau_u < 0 || tau_d < 0 || tau_p + tau_u + tau_d != tau_c)
    throw std::invalid_argument("frame split must satisfy tau_p + tau_u + tau_d = tau_c");
}

PowerBreakdown power_total(const PowerModelParams& params, int antennas_per_ap, const Association& assoc,
                           const MatR& rho_kl, const VecR& p, const VecR& se_ul, const VecR& se_dl) {
  const int K = assoc.K(), L = assoc.L();
  const double N = antennas_per_ap;
  const double tc = params.tau_c;
  PowerBreakdown pb;
  pb.ue.resize(K);
  for (int k = 0; k < K; ++k)
    pb.ue[k] = params.ue_circuit_w + (params.tau_p * params.pilot_power_w + params.tau_u * p[k]) / (tc * params.eta_ue);

  pb.ap = VecR::Zero(L);
  pb.fronthaul = VecR::Zero(L);
  for (int l = 0; l < L; ++l) {
    const auto& dl = assoc.served[static_cast<std::size_t>(l)];
    if (dl.empty() && params.ap_sleep) continue;
    const double served = static_cast<double>(dl.size());
    double tx = 0.0;
    for (int k : dl) tx += rho_kl(k, l);
    pb.ap[l] = N * params.ap_circuit_w + N * served * params.processing_w + params.tau_d / (tc * params.eta_ap) * tx;
    pb.fronthaul[l] = params.fronthaul_fixed_w + (params.tau_u + params.tau_d) / tc * served * params.signaling_w;
  }

  const double gbps = params.bandwidth_hz / 1e9;
  pb.cpu = params.cpu_fixed_w +
           gbps * (se_ul.sum() * params.decoding_w_per_gbps + se_dl.sum() * params.encoding_w_per_gbps);
  pb.total = pb.ue.sum() + pb.ap.sum() + pb.fronthaul.sum() + pb.cpu;
  return pb;
}

double energy_efficiency(const VecR& se_ul, const VecR& se_dl, double total_power_w, double bandwidth_hz) {
  if (!(total_power_w > 0.0)) throw std::invalid_argument("total power must be positive");
  return bandwidth_hz * (se_ul.sum() + se_dl.sum()) / total_power_w;
}

nlohmann::json to_json(const PowerBreakdown& pb) {
  return {{"ue_w", pb.ue.sum()},
          {"ap_w", pb.ap.sum()},
          {"fronthaul_w", pb.fronthaul.sum()},
          {"cpu_w", pb.cpu},
          {"total_w", pb.total}};
}

}  // namespace cfmimo
