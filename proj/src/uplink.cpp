// SPDX-License-Identifier: Apache-2.0

#include "cfmimo/uplink.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfmimo {

std::string to_string(CombinerKind kind) { return kind == CombinerKind::LMmse ? "L-MMSE" : "MR"; }

CombinerKind combiner_from_string(const std::string& name) {
  if (name == "L-MMSE") return CombinerKind::LMmse;
  if (name == "MR") return CombinerKind::MR;
  throw std::invalid_argument("unknown combiner '" + name + "' (expected L-MMSE or MR)");
}

CombinerBuilder::CombinerBuilder(CombinerKind kind, const ChannelStatistics& stats, const EstimationStatistics& est,
                                 VecR p)
    : kind_(kind), K_(stats.K), L_(stats.L), N_(stats.N), p_(std::move(p)) {
  if (p_.size() != K_) throw std::invalid_argument("power vector length must equal K");
  if ((p_.array() < 0.0).any()) throw std::invalid_argument("uplink powers must be nonnegative");
  if (kind_ == CombinerKind::MR) return;
  c_.resize(static_cast<std::size_t>(L_));
  for (int l = 0; l < L_; ++l) {
    MatC c = est.noise_var * MatC::Identity(N_, N_);
    for (int i = 0; i < K_; ++i) c += p_[i] * (stats.at(i, l) - est.B(i, l));
    c_[static_cast<std::size_t>(l)] = hermitian_part(c);
  }
}

void CombinerBuilder::build(const std::vector<VecC>& hhat, std::vector<VecC>& out) const {
  out.resize(hhat.size());
  if (kind_ == CombinerKind::MR) {
    for (std::size_t i = 0; i < hhat.size(); ++i) out[i] = hhat[i];
    return;
  }
  MatC hl(N_, K_);
  for (int l = 0; l < L_; ++l) {
    for (int k = 0; k < K_; ++k) hl.col(k) = hhat[static_cast<std::size_t>(k * L_ + l)];
    MatC a = c_[static_cast<std::size_t>(l)];
    a.noalias() += hl * p_.asDiagonal() * hl.adjoint();
    Eigen::LLT<MatC> llt(a);
    const MatC sol = llt.solve(hl);
    for (int k = 0; k < K_; ++k) out[static_cast<std::size_t>(k * L_ + l)] = p_[k] * sol.col(k);
  }
}

MonteCarloEngine::MonteCarloEngine(const ChannelStatistics& stats, const PilotAssignment& assign,
                                   const EstimationStatistics& est, CombinerKind kind, const VecR& p)
    : K_(stats.K), L_(stats.L), N_(stats.N), assign_(assign), est_(est), sampler_(stats), builder_(kind, stats, est, p) {}

void MonteCarloEngine::calibrate(int n_blocks, Rng& rng) {
  if (n_blocks < 1) throw std::invalid_argument("calibration needs at least one block");
  std::vector<double> acc(static_cast<std::size_t>(K_ * L_), 0.0);
  ChannelRealization h;
  std::vector<VecC> hhat, vbar;
  for (int b = 0; b < n_blocks; ++b) {
    sampler_.draw_into(rng, h);
    estimate_channels_into(h, est_, assign_, rng, hhat);
    builder_.build(hhat, vbar);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += vbar[i].squaredNorm();
  }
  scale_.resize(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    const double mean = acc[i] / n_blocks;
    scale_[i] = mean > 0.0 ? 1.0 / std::sqrt(mean) : 0.0;
  }
}

void MonteCarloEngine::draw_block(Rng& rng, SimulatedBlock& block) const {
  if (!calibrated()) throw std::logic_error("combiner normalization has not been calibrated");
  sampler_.draw_into(rng, block.h);
  estimate_channels_into(block.h, est_, assign_, rng, block.hhat);
  builder_.build(block.hhat, block.v);
  for (std::size_t i = 0; i < block.v.size(); ++i) block.v[i] *= scale_[i];
}

LsfMoments MonteCarloEngine::moments(int n_blocks, Rng& rng, int min_blocks) const {
  if (n_blocks < min_blocks)
    throw std::invalid_argument("Monte Carlo sample of " + std::to_string(n_blocks) + " blocks is below the minimum of " +
                                std::to_string(min_blocks));
  const int K = K_, L = L_;
  const auto KK = static_cast<std::size_t>(K * K);
  LsfMoments m;
  m.K = K;
  m.L = L;
  m.n_mc = n_blocks;
  m.second.assign(KK, MatC::Zero(L, L));
  m.first.assign(static_cast<std::size_t>(K), VecC::Zero(L));
  m.combiner_power.assign(static_cast<std::size_t>(K * L), 0.0);

  constexpr int kChunk = 64;
  std::vector<MatC> buf(KK, MatC(L, kChunk));
  SimulatedBlock block;
  MatC vl(N_, K), hl(N_, K), g(K, K);
  int filled = 0;
  auto flush = [&]() {
    if (filled == 0) return;
    for (std::size_t pair = 0; pair < KK; ++pair)
      m.second[pair].selfadjointView<Eigen::Lower>().rankUpdate(buf[pair].leftCols(filled));
    filled = 0;
  };

  for (int b = 0; b < n_blocks; ++b) {
    draw_block(rng, block);
    for (int l = 0; l < L; ++l) {
      for (int k = 0; k < K; ++k) {
        const auto idx = static_cast<std::size_t>(k * L + l);
        vl.col(k) = block.v[idx];
        hl.col(k) = block.h.h[idx];
        m.combiner_power[idx] += block.v[idx].squaredNorm();
      }
      g.noalias() = vl.adjoint() * hl;
      for (int k = 0; k < K; ++k) {
        m.first[static_cast<std::size_t>(k)][l] += g(k, k);
        for (int i = 0; i < K; ++i) buf[static_cast<std::size_t>(k * K + i)](l, filled) = g(k, i);
      }
    }
    if (++filled == kChunk) flush();
  }
  flush();

  const double inv = 1.0 / n_blocks;
  for (auto& s : m.second) {
    MatC full = s.selfadjointView<Eigen::Lower>();
    s = full * inv;
  }
  for (auto& f : m.first) f *= inv;
  for (auto& c : m.combiner_power) c *= inv;
  return m;
}

LsfStatistics lsf_statistics(const LsfMoments& m, const VecR& p, double noise_var) {
  if (p.size() != m.K) throw std::invalid_argument("power vector length must equal K");
  LsfStatistics s;
  s.K = m.K;
  s.L = m.L;
  s.n_mc = m.n_mc;
  s.noise_var = noise_var;
  s.delta.resize(static_cast<std::size_t>(m.K));
  s.xi.resize(static_cast<std::size_t>(m.K));
  for (int k = 0; k < m.K; ++k) {
    MatC d = noise_var * MatC::Identity(m.L, m.L);
    for (int i = 0; i < m.K; ++i)
      if (p[i] != 0.0) d += p[i] * m.M2(k, i);
    s.delta[static_cast<std::size_t>(k)] = hermitian_part(d);
    s.xi[static_cast<std::size_t>(k)] = std::sqrt(p[k]) * m.first[static_cast<std::size_t>(k)];
  }
  return s;
}

namespace {

VecC solve_pd(const MatC& a, const VecC& b) {
  Eigen::LLT<MatC> llt(a);
  if (llt.info() != Eigen::Success) throw std::runtime_error("LSF statistics matrix is not positive definite");
  return llt.solve(b);
}

}  // namespace

LsfdSolution olsfd(const LsfStatistics& stats, const VecR& p) {
  LsfdSolution sol;
  sol.a.resize(static_cast<std::size_t>(stats.K));
  for (int k = 0; k < stats.K; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    sol.a[kk] = std::sqrt(p[k]) * solve_pd(stats.delta[kk], stats.xi[kk]);
  }
  sol.assoc = Association::dense(stats.K, stats.L);
  return sol;
}

SinrValue uplink_sinr(const VecC& a, const LsfStatistics& stats, int k) {
  const auto kk = static_cast<std::size_t>(k);
  if (a.squaredNorm() == 0.0) return {0.0, true};
  const double signal = std::norm(a.dot(stats.xi[kk]));
  const double total = a.dot(stats.delta[kk] * a).real();
  const double den = total - signal;
  if (!(den > 0.0)) return {kSinrCap, true};
  return {std::min(signal / den, kSinrCap), false};
}

double uplink_se(double sinr, int tau_u, int tau_c) {
  return static_cast<double>(tau_u) / tau_c * std::log2(1.0 + sinr);
}

double uplink_mse(const VecC& a, const LsfStatistics& stats, int k, double p_k) {
  const auto kk = static_cast<std::size_t>(k);
  return a.dot(stats.delta[kk] * a).real() - 2.0 * std::sqrt(p_k) * a.dot(stats.xi[kk]).real() + p_k;
}

std::vector<std::vector<int>> partial_interferers(const Association& assoc) {
  const int K = assoc.K();
  std::vector<std::vector<int>> out(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    std::vector<char> mark(static_cast<std::size_t>(K), 0);
    for (int l : assoc.serving[static_cast<std::size_t>(k)])
      for (int i : assoc.served[static_cast<std::size_t>(l)]) mark[static_cast<std::size_t>(i)] = 1;
    for (int i = 0; i < K; ++i)
      if (mark[static_cast<std::size_t>(i)]) out[static_cast<std::size_t>(k)].push_back(i);
  }
  return out;
}

LsfdSolution plsfd(const LsfMoments& m, const VecR& p, double noise_var, const Association& assoc, bool full_matrix) {
  if (assoc.K() != m.K || assoc.L() != m.L) throw std::invalid_argument("association dimensions do not match statistics");
  const auto partial = partial_interferers(assoc);
  LsfdSolution sol;
  sol.a.assign(static_cast<std::size_t>(m.K), VecC::Zero(m.L));
  for (int k = 0; k < m.K; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const auto& mk = assoc.serving[kk];
    if (mk.empty()) throw std::invalid_argument("UE " + std::to_string(k) + " has no serving AP");
    MatC d = noise_var * MatC::Identity(m.L, m.L);
    for (int i : partial[kk]) d += p[i] * m.M2(k, i);
    d = hermitian_part(d);
    const VecC xi = std::sqrt(p[k]) * m.first[kk];
    if (full_matrix) {
      const VecC full = std::sqrt(p[k]) * solve_pd(d, xi);
      for (int l : mk) sol.a[kk][l] = full[l];
    } else {
      const VecC sub = std::sqrt(p[k]) * solve_pd(gather(d, mk), gather(xi, mk));
      for (std::size_t j = 0; j < mk.size(); ++j) sol.a[kk][mk[j]] = sub[static_cast<Eigen::Index>(j)];
    }
  }
  sol.assoc = assoc;
  return sol;
}

Association heuristic_dcc(const NetworkGeometry& geom, const PilotAssignment& assign) {
  std::vector<std::vector<int>> serving(static_cast<std::size_t>(geom.K));
  for (int k = 0; k < geom.K; ++k) {
    int master = 0;
    geom.beta.row(k).maxCoeff(&master);
    serving[static_cast<std::size_t>(k)].push_back(master);
  }
  for (int l = 0; l < geom.L; ++l) {
    for (const auto& users : assign.users) {
      if (users.empty()) continue;
      int best = users.front();
      for (int k : users)
        if (geom.beta(k, l) > geom.beta(best, l)) best = k;
      serving[static_cast<std::size_t>(best)].push_back(l);
    }
  }
  return Association::from_serving(geom.L, std::move(serving));
}

}  // namespace cfmimo
