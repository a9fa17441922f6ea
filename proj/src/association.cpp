// SPDX-License-Identifier: Apache-2.0

#include "cfmimo/association.hpp"

#include <algorithm>
#include <stdexcept>

namespace cfmimo {

Association Association::from_serving(int L, std::vector<std::vector<int>> serving) {
  Association a;
  a.served.assign(static_cast<std::size_t>(L), {});
  for (std::size_t k = 0; k < serving.size(); ++k) {
    auto& m = serving[k];
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
    for (int l : m) {
      if (l < 0 || l >= L) throw std::out_of_range("AP index out of range in association");
      a.served[static_cast<std::size_t>(l)].push_back(static_cast<int>(k));
    }
  }
  a.serving = std::move(serving);
  return a;
}

Association Association::dense(int K, int L) {
  std::vector<std::vector<int>> serving(static_cast<std::size_t>(K));
  for (auto& m : serving)
    for (int l = 0; l < L; ++l) m.push_back(l);
  return from_serving(L, std::move(serving));
}

bool Association::serves(int k, int l) const {
  const auto& m = serving[static_cast<std::size_t>(k)];
  return std::binary_search(m.begin(), m.end(), l);
}

bool Association::consistent() const {
  for (int k = 0; k < K(); ++k)
    for (int l : serving[static_cast<std::size_t>(k)]) {
      const auto& d = served[static_cast<std::size_t>(l)];
      if (!std::binary_search(d.begin(), d.end(), k)) return false;
    }
  for (int l = 0; l < L(); ++l)
    for (int k : served[static_cast<std::size_t>(l)])
      if (!serves(k, l)) return false;
  return true;
}

double Association::mean_serving_aps() const {
  if (serving.empty()) return 0.0;
  double total = 0.0;
  for (const auto& m : serving) total += static_cast<double>(m.size());
  return total / static_cast<double>(serving.size());
}

int Association::active_aps() const {
  return static_cast<int>(std::count_if(served.begin(), served.end(), [](const auto& d) { return !d.empty(); }));
}

}  // namespace cfmimo
