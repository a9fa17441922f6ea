// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace cfmimo {

/// AP-UE association: serving[k] = M_k (APs serving UE k), served[l] = D_l
/// (UEs served by AP l). Both lists are kept sorted and mutually consistent.
struct Association {
  std::vector<std::vector<int>> serving;
  std::vector<std::vector<int>> served;

  int K() const { return static_cast<int>(serving.size()); }
  int L() const { return static_cast<int>(served.size()); }

  static Association from_serving(int L, std::vector<std::vector<int>> serving);
  static Association dense(int K, int L);

  bool serves(int k, int l) const;
  /// True when every l in M_k has k in D_l and vice versa.
  bool consistent() const;
  double mean_serving_aps() const;
  int active_aps() const;
};

}  // namespace cfmimo
