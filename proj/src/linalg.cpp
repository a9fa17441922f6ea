// SPDX-License-Identifier: Apache-2.0

#include "cfmimo/linalg.hpp"

#include <algorithm>

namespace cfmimo {

MatC hermitian_sqrt(const MatC& a) {
  Eigen::SelfAdjointEigenSolver<MatC> es(hermitian_part(a));
  VecR ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double min_eigenvalue(const MatC& a) {
  Eigen::SelfAdjointEigenSolver<MatC> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const MatR& a) {
  Eigen::SelfAdjointEigenSolver<MatR> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

VecC gather(const VecC& v, const std::vector<int>& idx) {
  VecC out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[idx[i]];
  return out;
}

MatC gather(const MatC& m, const std::vector<int>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  MatC out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

}  // namespace cfmimo
