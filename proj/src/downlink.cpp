// SPDX-License-Identifier: Apache-2.0

#include "cfmimo/downlink.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfmimo {

MatR LsfpSolution::per_ap_power() const {
  const int K = static_cast<int>(omega.size());
  const int L = K > 0 ? static_cast<int>(omega.front().size()) : 0;
  MatR out(K, L);
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < L; ++l) out(k, l) = rho[k] * std::norm(omega[static_cast<std::size_t>(k)][l]);
  return out;
}

std::vector<SinrValue> downlink_sinr(const std::vector<VecC>& b, const LsfMoments& m, double noise_var) {
  const int K = m.K;
  std::vector<SinrValue> out(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const double signal = std::norm(b[kk].dot(m.first[kk]));
    double total = 0.0;
    for (int i = 0; i < K; ++i) {
      const VecC& bi = b[static_cast<std::size_t>(i)];
      total += bi.dot(m.M2(i, k) * bi).real();
    }
    if (signal == 0.0) {
      out[kk] = {0.0, b[kk].squaredNorm() == 0.0};
      continue;
    }
    const double den = total - signal + noise_var;
    if (!(den > 0.0))
      out[kk] = {kSinrCap, true};
    else
      out[kk] = {std::min(signal / den, kSinrCap), false};
  }
  return out;
}

double downlink_se(double sinr, int tau_d, int tau_c) { return static_cast<double>(tau_d) / tau_c * std::log2(1.0 + sinr); }

DualityResult duality_power_allocation(const std::vector<VecC>& a_tilde, const LsfMoments& m, const VecR& p,
                                       double noise_var) {
  const int K = m.K;
  const LsfStatistics stats = lsf_statistics(m, p, noise_var);
  DualityResult res;
  res.target.resize(K);
  VecR s(K);
  MatR q(K, K);  // q(k, i) = a_k^H E{g_ki g_ki^H} a_k
  for (int k = 0; k < K; ++k) {
    const VecC& a = a_tilde[static_cast<std::size_t>(k)];
    res.target[k] = uplink_sinr(a, stats, k).value;
    s[k] = std::norm(a.dot(m.first[static_cast<std::size_t>(k)]));
    for (int i = 0; i < K; ++i) q(k, i) = a.dot(m.M2(k, i) * a).real();
  }
  // uplink: (D - Q) p = sigma^2 1; downlink: (D - Q^T) rho = sigma^2 1
  MatR sys = -q.transpose();
  for (int k = 0; k < K; ++k) {
    if (!(s[k] > 0.0) || !(res.target[k] > 0.0)) {
      res.feasible = false;
      res.rho = p;
      return res;
    }
    sys(k, k) += s[k] * (1.0 + res.target[k]) / res.target[k];
  }
  res.rho = sys.partialPivLu().solve(VecR::Constant(K, noise_var));
  if (!res.rho.allFinite() || (res.rho.array() < 0.0).any()) {
    res.feasible = false;
    res.rho = p;
  }
  return res;
}

VecR centralized_power_allocation(const MatR& beta, const std::vector<VecC>& omega, const Association& assoc,
                                  const DownlinkPowerParams& params) {
  const int K = assoc.K();
  VecR c(K), varpi(K);
  for (int k = 0; k < K; ++k) {
    const auto& mk = assoc.serving[static_cast<std::size_t>(k)];
    if (mk.empty()) throw std::invalid_argument("UE " + std::to_string(k) + " has no serving AP");
    double sum = 0.0, peak = 0.0;
    for (int l : mk) {
      sum += std::pow(beta(k, l), params.vartheta);
      peak = std::max(peak, std::norm(omega[static_cast<std::size_t>(k)][l]));
    }
    if (!(peak > 0.0)) throw std::invalid_argument("UE " + std::to_string(k) + " has a zero direction on its serving APs");
    c[k] = std::pow(sum, params.kappa);
    varpi[k] = peak;
  }
  VecR load = VecR::Zero(assoc.L());
  for (int l = 0; l < assoc.L(); ++l)
    for (int i : assoc.served[static_cast<std::size_t>(l)]) load[l] += c[i] * std::pow(varpi[i], 1.0 - params.power_mu);
  VecR rho(K);
  for (int k = 0; k < K; ++k) {
    double worst = 0.0;
    for (int j : assoc.serving[static_cast<std::size_t>(k)]) worst = std::max(worst, load[j]);
    rho[k] = params.rho_max * c[k] * std::pow(varpi[k], -params.power_mu) / worst;
  }
  return rho;
}

MatR distributed_fpa(const MatR& beta, const Association& assoc, double nu, double rho_max) {
  MatR rho = MatR::Zero(beta.rows(), beta.cols());
  for (int l = 0; l < assoc.L(); ++l) {
    const auto& dl = assoc.served[static_cast<std::size_t>(l)];
    double denom = 0.0;
    for (int i : dl) denom += std::pow(beta(i, l), nu);
    for (int k : dl) rho(k, l) = rho_max * std::pow(beta(k, l), nu) / denom;
  }
  return rho;
}

LsfpSolution make_lsfp(std::vector<VecC> directions, const VecR& rho, Association assoc) {
  LsfpSolution s;
  const auto K = directions.size();
  s.rho = rho;
  s.omega.resize(K);
  s.b.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double n = directions[k].norm();
    if (!(n > 0.0)) throw std::invalid_argument("LSFP direction of UE " + std::to_string(k) + " is zero");
    s.omega[k] = directions[k] / n;
    s.b[k] = std::sqrt(rho[static_cast<Eigen::Index>(k)]) * s.omega[k];
  }
  s.assoc = std::move(assoc);
  return s;
}

double per_ap_excess(const LsfpSolution& sol, double rho_max) {
  const MatR load = sol.per_ap_power();
  return load.colwise().sum().maxCoeff() - rho_max;
}

namespace {

std::vector<VecC> fpa_directions(const MatR& rho_kl) {
  std::vector<VecC> dir(static_cast<std::size_t>(rho_kl.rows()));
  for (Eigen::Index k = 0; k < rho_kl.rows(); ++k) dir[static_cast<std::size_t>(k)] = rho_kl.row(k).transpose().cwiseSqrt().cast<cplx>();
  return dir;
}

LsfpSolution centralized(std::vector<VecC> directions, const MatR& beta, Association assoc,
                         const DownlinkPowerParams& params) {
  const VecR unit = VecR::Ones(assoc.K());
  LsfpSolution s = make_lsfp(std::move(directions), unit, std::move(assoc));
  const VecR rho = centralized_power_allocation(beta, s.omega, s.assoc, params);
  return make_lsfp(s.omega, rho, std::move(s.assoc));
}

VecC solve_on_support(const MatC& d, const VecC& rhs, const std::vector<int>& support, int L) {
  Eigen::LLT<MatC> llt(gather(d, support));
  if (llt.info() != Eigen::Success) throw std::runtime_error("LSF statistics matrix is not positive definite");
  const VecC sub = llt.solve(gather(rhs, support));
  VecC out = VecC::Zero(L);
  for (std::size_t j = 0; j < support.size(); ++j) out[support[j]] = sub[static_cast<Eigen::Index>(j)];
  return out;
}

}  // namespace

LsfpSolution fpa_scheme(const MatR& beta, const Association& assoc, const DownlinkPowerParams& params) {
  const MatR rho_kl = distributed_fpa(beta, assoc, params.nu, params.rho_max);
  return make_lsfp(fpa_directions(rho_kl), rho_kl.rowwise().sum(), assoc);
}

LsfpSolution hfpa_scheme(const MatR& beta, const Association& assoc, const DownlinkPowerParams& params) {
  const MatR rho_kl = distributed_fpa(beta, assoc, params.nu, params.rho_max);
  return centralized(fpa_directions(rho_kl), beta, assoc, params);
}

LsfpSolution vlsfp_scheme(const LsfStatistics& stats, const MatR& beta, const DownlinkPowerParams& params) {
  std::vector<VecC> dir(static_cast<std::size_t>(stats.K));
  for (int k = 0; k < stats.K; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    Eigen::LLT<MatC> llt(stats.delta[kk]);
    if (llt.info() != Eigen::Success) throw std::runtime_error("LSF statistics matrix is not positive definite");
    dir[kk] = llt.solve(stats.xi[kk]);
  }
  return centralized(std::move(dir), beta, Association::dense(stats.K, stats.L), params);
}

LsfpSolution plsfp_scheme(const LsfMoments& m, double noise_var, const MatR& beta, const Association& assoc,
                          const DownlinkPowerParams& params) {
  const auto partial = partial_interferers(assoc);
  std::vector<VecC> dir(static_cast<std::size_t>(m.K));
  for (int k = 0; k < m.K; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    MatC d = noise_var * MatC::Identity(m.L, m.L);
    for (int i : partial[kk]) d += m.M2(k, i);
    dir[kk] = solve_on_support(hermitian_part(d), m.first[kk], assoc.serving[kk], m.L);
  }
  return centralized(std::move(dir), beta, assoc, params);
}

LsfpSolution slsfp_scheme(const std::vector<VecC>& sparse_a, const Association& assoc, const MatR& beta,
                          const DownlinkPowerParams& params) {
  return centralized(sparse_a, beta, assoc, params);
}

LsfpSolution svlsfp_scheme(const LsfStatistics& stats, const Association& assoc, const MatR& beta,
                           const DownlinkPowerParams& params) {
  std::vector<VecC> dir(static_cast<std::size_t>(stats.K));
  for (int k = 0; k < stats.K; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    dir[kk] = solve_on_support(stats.delta[kk], stats.xi[kk], assoc.serving[kk], stats.L);
  }
  return centralized(std::move(dir), beta, assoc, params);
}

std::string to_string(DownlinkScheme s) {
  switch (s) {
    case DownlinkScheme::FPA: return "FPA";
    case DownlinkScheme::HFPA: return "H-FPA";
    case DownlinkScheme::VLSFP: return "V-LSFP";
    case DownlinkScheme::PLSFP: return "P-LSFP";
    case DownlinkScheme::SLSFP: return "S-LSFP";
    case DownlinkScheme::SVLSFP: return "SV-LSFP";
  }
  return "?";
}

DownlinkScheme downlink_scheme_from_string(const std::string& name) {
  for (auto s : {DownlinkScheme::FPA, DownlinkScheme::HFPA, DownlinkScheme::VLSFP, DownlinkScheme::PLSFP,
                 DownlinkScheme::SLSFP, DownlinkScheme::SVLSFP})
    if (to_string(s) == name) return s;
  throw std::invalid_argument("unknown downlink scheme '" + name + "'");
}

}  // namespace cfmimo
