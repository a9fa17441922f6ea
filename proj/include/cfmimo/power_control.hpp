// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "cfmimo/linalg.hpp"

namespace cfmimo {

/// Fractional uplink power control: p_k = p_max (min_i S_i / S_k)^theta with
/// S_k = sum_{l in M_k} beta_kl. Throws on an empty M_k or theta outside [0, 1].
VecR fractional_power_control(const MatR& beta, const std::vector<std::vector<int>>& serving, double theta,
                              double p_max);

}  // namespace cfmimo
