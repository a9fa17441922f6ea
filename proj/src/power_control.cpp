// SPDX-License-Identifier: Apache-2.0

#include "cfmimo/power_control.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cfmimo {

VecR fractional_power_control(const MatR& beta, const std::vector<std::vector<int>>& serving, double theta,
                              double p_max) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
  const auto K = static_cast<Eigen::Index>(serving.size());
  VecR agg(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto& mk = serving[static_cast<std::size_t>(k)];
    if (mk.empty()) throw std::invalid_argument("UE " + std::to_string(k) + " has no serving AP");
    double s = 0.0;
    for (int l : mk) s += beta(k, l);
    agg[k] = s;
  }
  const double weakest = agg.minCoeff();
  VecR p(K);
  for (Eigen::Index k = 0; k < K; ++k) p[k] = p_max * std::pow(weakest / agg[k], theta);
  return p;
}

}  // namespace cfmimo
