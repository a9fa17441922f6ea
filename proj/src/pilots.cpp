// SPDX-License-Identifier: Apache-2.0

#include "cfmimo/pilots.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cfmimo {

PilotAssignment make_assignment(std::vector<int> pilot, int tau_p) {
  PilotAssignment a;
  a.tau_p = tau_p;
  a.users.assign(static_cast<std::size_t>(tau_p), {});
  for (std::size_t k = 0; k < pilot.size(); ++k) {
    if (pilot[k] < 0 || pilot[k] >= tau_p) throw std::invalid_argument("pilot index out of range");
    a.users[static_cast<std::size_t>(pilot[k])].push_back(static_cast<int>(k));
  }
  a.pilot = std::move(pilot);
  return a;
}

PilotAssignment assign_pilots(const NetworkGeometry& geom, int tau_p) {
  if (tau_p < 1) throw std::invalid_argument("tau_p must be >= 1");
  const int K = geom.K;
  std::vector<int> pilot(static_cast<std::size_t>(K), -1);
  std::vector<int> load(static_cast<std::size_t>(tau_p), 0);
  for (int k = 0; k < K; ++k) {
    if (k < tau_p) {
      pilot[k] = k;
      ++load[k];
      continue;
    }
    int master = 0;
    geom.beta.row(k).maxCoeff(&master);
    int min_load = std::numeric_limits<int>::max();
    for (int t = 0; t < tau_p; ++t) min_load = std::min(min_load, load[t]);
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int t = 0; t < tau_p; ++t) {
      if (load[t] != min_load) continue;
      double cost = 0.0;
      for (int i = 0; i < k; ++i)
        if (pilot[i] == t) cost += geom.beta(i, master);
      if (cost < best_cost) {
        best_cost = cost;
        best = t;
      }
    }
    pilot[k] = best;
    ++load[best];
  }
  return make_assignment(std::move(pilot), tau_p);
}

EstimationStatistics estimation_stats(const ChannelStatistics& stats, const PilotAssignment& assign,
                                      double pilot_power, double noise_var) {
  assert(noise_var > 0.0);
  EstimationStatistics e;
  e.K = stats.K;
  e.L = stats.L;
  e.N = stats.N;
  e.tau_p = assign.tau_p;
  e.pilot_power = pilot_power;
  e.noise_var = noise_var;
  const auto KL = static_cast<std::size_t>(e.K * e.L);
  e.psi.resize(KL);
  e.b.resize(KL);
  e.estimator.resize(KL);
  const double tp = e.tau_p * pilot_power;
  const MatC eye = MatC::Identity(e.N, e.N);

  for (int l = 0; l < e.L; ++l) {
    for (int t = 0; t < assign.tau_p; ++t) {
      const auto& members = assign.users[static_cast<std::size_t>(t)];
      if (members.empty()) continue;
      MatC psi = noise_var * eye;
      for (int i : members) psi += tp * stats.at(i, l);
      psi = hermitian_part(psi);
      Eigen::LLT<MatC> llt(psi);
      if (llt.info() != Eigen::Success) throw std::runtime_error("pilot correlation matrix is not positive definite");
      const MatC psi_inv = llt.solve(eye);
      for (int k : members) {
        const MatC& r = stats.at(k, l);
        const auto idx = static_cast<std::size_t>(k * e.L + l);
        e.psi[idx] = psi;
        e.estimator[idx] = std::sqrt(tp) * r * psi_inv;
        e.b[idx] = hermitian_part(tp * r * psi_inv * r);
      }
    }
  }
  return e;
}

void estimate_channels_into(const ChannelRealization& real, const EstimationStatistics& est,
                            const PilotAssignment& assign, Rng& rng, std::vector<VecC>& out) {
  const int L = est.L;
  const int N = est.N;
  const double amp = std::sqrt(est.tau_p * est.pilot_power);
  const double noise_amp = std::sqrt(est.noise_var);
  out.resize(static_cast<std::size_t>(est.K * L));
  VecC y(N);
  for (int l = 0; l < L; ++l) {
    for (int t = 0; t < assign.tau_p; ++t) {
      const auto& members = assign.users[static_cast<std::size_t>(t)];
      if (members.empty()) continue;
      for (int n = 0; n < N; ++n) y[n] = noise_amp * rng.complex_normal();
      for (int i : members) y += amp * real.at(i, l);
      for (int k : members) {
        const auto idx = static_cast<std::size_t>(k * L + l);
        out[idx].noalias() = est.estimator[idx] * y;
      }
    }
  }
}

std::vector<VecC> estimate_channels(const ChannelRealization& real, const EstimationStatistics& est,
                                    const PilotAssignment& assign, Rng& rng) {
  std::vector<VecC> out;
  estimate_channels_into(real, est, assign, rng, out);
  return out;
}

}  // namespace cfmimo
