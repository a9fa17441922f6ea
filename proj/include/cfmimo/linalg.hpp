// SPDX-License-Identifier: Apache-2.0
//
// Dense linear-algebra aliases and small Hermitian helpers shared by all modules.

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace cfmimo {

using cplx = std::complex<double>;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;
using VecR = Eigen::VectorXd;
using MatR = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

/// (A + A^H) / 2
inline MatC hermitian_part(const MatC& a) { return 0.5 * (a + a.adjoint()); }

/// Principal square root of a Hermitian PSD matrix. Negative eigenvalues are
/// clipped at zero before taking the root.
MatC hermitian_sqrt(const MatC& a);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const MatC& a);

/// Largest eigenvalue of a real symmetric matrix.
double max_eigenvalue(const MatR& a);

/// Index set helper: gather the sub-vector / principal sub-matrix at `idx`.
VecC gather(const VecC& v, const std::vector<int>& idx);
MatC gather(const MatC& m, const std::vector<int>& idx);

}  // namespace cfmimo
