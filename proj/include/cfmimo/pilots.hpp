// SPDX-License-Identifier: Apache-2.0
//
// Pilot assignment and per-AP MMSE channel estimation.

#pragma once

#include <vector>

#include "cfmimo/geometry.hpp"

namespace cfmimo {

struct PilotAssignment {
  int tau_p = 0;
  std::vector<int> pilot;               // pilot index of each UE, in [0, tau_p)
  std::vector<std::vector<int>> users;  // UEs sharing each pilot, ascending

  int K() const { return static_cast<int>(pilot.size()); }
};

/// The first tau_p UEs get unique pilots. Every later UE picks, among the
/// least-loaded pilots, the one whose current holders have the smallest summed
/// gain at the UE's strongest AP.
PilotAssignment assign_pilots(const NetworkGeometry& geom, int tau_p);

/// Builds the per-pilot user sets from a pilot index vector.
PilotAssignment make_assignment(std::vector<int> pilot, int tau_p);

struct EstimationStatistics {
  int K = 0;
  int L = 0;
  int N = 0;
  int tau_p = 0;
  double pilot_power = 0.0;  // p_p
  double noise_var = 1.0;    // sigma^2
  std::vector<MatC> psi;        // Psi_{t_k l}, index k * L + l
  std::vector<MatC> b;          // B_kl = tau_p p_p R Psi^{-1} R
  std::vector<MatC> estimator;  // sqrt(tau_p p_p) R Psi^{-1}

  const MatC& Psi(int k, int l) const { return psi[static_cast<std::size_t>(k * L + l)]; }
  const MatC& B(int k, int l) const { return b[static_cast<std::size_t>(k * L + l)]; }
};

EstimationStatistics estimation_stats(const ChannelStatistics& stats, const PilotAssignment& assign,
                                      double pilot_power, double noise_var);

/// Forms the received pilot signals of one block (fresh noise drawn from
/// `rng`) and returns the MMSE estimates, index k * L + l.
std::vector<VecC> estimate_channels(const ChannelRealization& real, const EstimationStatistics& est,
                                    const PilotAssignment& assign, Rng& rng);

/// Same as estimate_channels but reuses `out` storage.
void estimate_channels_into(const ChannelRealization& real, const EstimationStatistics& est,
                            const PilotAssignment& assign, Rng& rng, std::vector<VecC>& out);

}  // namespace cfmimo
