// SPDX-License-Identifier: Apache-2.0

#include "cfmimo/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cfmimo {

MatR embed_matrix(const MatC& m) {
  const Eigen::Index n = m.rows();
  MatR r(2 * n, 2 * n);
  r.topLeftCorner(n, n) = m.real();
  r.topRightCorner(n, n) = -m.imag();
  r.bottomLeftCorner(n, n) = m.imag();
  r.bottomRightCorner(n, n) = m.real();
  return r;
}

VecR embed_vector(const VecC& v) {
  VecR r(2 * v.size());
  r.head(v.size()) = v.real();
  r.tail(v.size()) = v.imag();
  return r;
}

VecC unembed_vector(const VecR& v) {
  const Eigen::Index n = v.size() / 2;
  VecC c(n);
  for (Eigen::Index i = 0; i < n; ++i) c[i] = cplx(v[i], v[n + i]);
  return c;
}

RealEmbedding embed(const std::vector<MatC>& delta, const std::vector<VecC>& xi, const VecR& p) {
  if (delta.size() != xi.size() || static_cast<Eigen::Index>(delta.size()) != p.size())
    throw std::invalid_argument("embedding inputs must all have K entries");
  RealEmbedding e;
  e.K = static_cast<int>(delta.size());
  e.L = e.K > 0 ? static_cast<int>(delta.front().rows()) : 0;
  for (int k = 0; k < e.K; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    e.delta.push_back(embed_matrix(hermitian_part(delta[kk])));
    e.xi.push_back(std::sqrt(p[k]) * embed_vector(xi[kk]));
  }
  return e;
}

RealEmbedding embed(const LsfStatistics& stats, const VecR& p) { return embed(stats.delta, stats.xi, p); }

VecR embed_weights(const std::vector<VecC>& a) {
  if (a.empty()) return VecR();
  const Eigen::Index L = a.front().size();
  VecR r(2 * L * static_cast<Eigen::Index>(a.size()));
  for (std::size_t k = 0; k < a.size(); ++k) r.segment(static_cast<Eigen::Index>(k) * 2 * L, 2 * L) = embed_vector(a[k]);
  return r;
}

std::vector<VecC> unembed_weights(const VecR& a_r, int K, int L) {
  std::vector<VecC> a(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) a[static_cast<std::size_t>(k)] = unembed_vector(a_r.segment(k * 2 * L, 2 * L));
  return a;
}

std::vector<int> group_indices(int K, int L, int l) {
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(2 * K));
  for (int k = 0; k < K; ++k) {
    idx.push_back(k * 2 * L + l);
    idx.push_back(k * 2 * L + L + l);
  }
  return idx;
}

VecR prox_l1(const VecR& u, double t) {
  VecR x(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double m = std::abs(u[i]) - t;
    x[i] = m > 0.0 ? std::copysign(m, u[i]) : 0.0;
  }
  return x;
}

VecR prox_l2(const VecR& u, double t) {
  const double n = u.norm();
  if (n <= t || n == 0.0) return VecR::Zero(u.size());
  return u * (1.0 - t / n);
}

VecR prox_composite(const VecR& u, double t_l1, double t_l2) { return prox_l2(prox_l1(u, t_l1), t_l2); }

namespace {

double group_penalty(const VecR& a_r, int K, int L) {
  double total = 0.0;
  for (int l = 0; l < L; ++l) {
    double sq = 0.0;
    for (int k = 0; k < K; ++k) {
      const double re = a_r[k * 2 * L + l];
      const double im = a_r[k * 2 * L + L + l];
      sq += re * re + im * im;
    }
    total += std::sqrt(sq);
  }
  return total;
}

double block_smooth(const MatR& d, const VecR& xi, const VecR& a) { return a.dot(d * a) - 2.0 * a.dot(xi); }

void check_finite(double f, const char* who, int iteration) {
  if (!std::isfinite(f))
    throw std::runtime_error(std::string(who) + ": objective became non-finite at iteration " +
                             std::to_string(iteration) + " (step size too large or corrupt statistics)");
}

bool small_change(double before, double after, double tol) {
  return std::abs(before - after) <= tol * std::max(std::abs(after), std::numeric_limits<double>::min());
}

SparseSolution finish(const RealEmbedding& emb, VecR a_r, const SparsityPenalty& pen, SparseSolution s) {
  s.objective = sparse_objective(emb, a_r, pen);
  s.a = unembed_weights(a_r, emb.K, emb.L);
  s.a_r = std::move(a_r);
  return s;
}

}  // namespace

double sparse_objective(const RealEmbedding& emb, const VecR& a_r, const SparsityPenalty& pen) {
  const int n2 = 2 * emb.L;
  double f = 0.0;
  for (int k = 0; k < emb.K; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    f += block_smooth(emb.delta[kk], emb.xi[kk], a_r.segment(k * n2, n2));
  }
  if (pen.lambda != 0.0) f += pen.lambda * a_r.lpNorm<1>();
  if (pen.gamma != 0.0) f += pen.gamma * group_penalty(a_r, emb.K, emb.L);
  return f;
}

VecR unpenalized_solution(const RealEmbedding& emb) {
  const int n2 = 2 * emb.L;
  VecR a(emb.dim());
  for (int k = 0; k < emb.K; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    Eigen::LLT<MatR> llt(emb.delta[kk]);
    if (llt.info() != Eigen::Success) throw std::runtime_error("embedded statistics matrix is not positive definite");
    a.segment(k * n2, n2) = llt.solve(emb.xi[kk]);
  }
  return a;
}

SparseSolution solve_ew(const RealEmbedding& emb, double lambda, const SolverConfig& cfg, const VecR* init) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  const int K = emb.K, n2 = 2 * emb.L;
  VecR a_all = init ? *init : unpenalized_solution(emb);
  if (a_all.size() != emb.dim()) throw std::invalid_argument("initial point has the wrong dimension");

  struct Block {
    VecR a, a_prev, da, da_prev;
    double f = 0.0, mu = 0.0;
    int n = 1;
    bool done = false;
  };
  std::vector<Block> blocks(static_cast<std::size_t>(K));
  SparseSolution sol;
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    auto& b = blocks[static_cast<std::size_t>(k)];
    const MatR& d = emb.delta[static_cast<std::size_t>(k)];
    const VecR& xi = emb.xi[static_cast<std::size_t>(k)];
    b.a = a_all.segment(k * n2, n2);
    b.a_prev = b.a;
    b.da = d * b.a;
    b.da_prev = b.da;
    b.f = b.a.dot(b.da) - 2.0 * b.a.dot(xi) + lambda * b.a.lpNorm<1>();
    b.mu = cfg.step_mu > 0.0 ? cfg.step_mu : 1.0 / (2.0 * max_eigenvalue(d));
    total += b.f;
  }
  if (cfg.record_trace) sol.trace.push_back(total);

  int remaining = K;
  while (remaining > 0 && sol.outer < cfg.n_max) {
    ++sol.outer;
    for (int k = 0; k < K; ++k) {
      auto& b = blocks[static_cast<std::size_t>(k)];
      if (b.done) continue;
      const MatR& d = emb.delta[static_cast<std::size_t>(k)];
      const VecR& xi = emb.xi[static_cast<std::size_t>(k)];
      const double beta = static_cast<double>(b.n - 1) / (b.n + 2);
      VecR y = b.a + beta * (b.a - b.a_prev);
      VecR dy = b.da + beta * (b.da - b.da_prev);
      VecR a_new = prox_l1(y - b.mu * (2.0 * dy - 2.0 * xi), b.mu * lambda);
      VecR da_new = d * a_new;
      double f_new = a_new.dot(da_new) - 2.0 * a_new.dot(xi) + lambda * a_new.lpNorm<1>();
      check_finite(f_new, "solve_ew", sol.outer);
      if (f_new > b.f && beta > 0.0) {
        // momentum overshoot: restart from a plain proximal step
        ++sol.restarts;
        b.n = 1;
        a_new = prox_l1(b.a - b.mu * (2.0 * b.da - 2.0 * xi), b.mu * lambda);
        da_new = d * a_new;
        f_new = a_new.dot(da_new) - 2.0 * a_new.dot(xi) + lambda * a_new.lpNorm<1>();
      }
      ++sol.iterations;
      if (f_new > b.f) {
        // no descent left at this step size
        b.done = true;
        --remaining;
        continue;
      }
      const bool stop = small_change(b.f, f_new, cfg.tol);
      b.a_prev.swap(b.a);
      b.da_prev.swap(b.da);
      b.a = std::move(a_new);
      b.da = std::move(da_new);
      b.f = f_new;
      ++b.n;
      if (stop) {
        b.done = true;
        --remaining;
      }
    }
    if (cfg.record_trace) {
      total = 0.0;
      for (const auto& b : blocks) total += b.f;
      sol.trace.push_back(total);
    }
  }
  sol.converged = remaining == 0;
  for (int k = 0; k < K; ++k) a_all.segment(k * n2, n2) = blocks[static_cast<std::size_t>(k)].a;
  return finish(emb, std::move(a_all), {lambda, 0.0}, std::move(sol));
}

SparseSolution solve_gw(const RealEmbedding& emb, double lambda, double gamma, const SolverConfig& cfg,
                        const VecR* init) {
  if (lambda < 0.0 || gamma < 0.0) throw std::invalid_argument("lambda and gamma must be >= 0");
  const int K = emb.K, L = emb.L, n2 = 2 * L;
  VecR a = init ? *init : unpenalized_solution(emb);
  if (a.size() != emb.dim()) throw std::invalid_argument("initial point has the wrong dimension");

  // X = blockdiag(X_k) with X_k^T X_k = Δ_k, ξ̄ = X^{-T} ξ, residual R = ξ̄ - X a
  std::vector<MatR> x(static_cast<std::size_t>(K));
  std::vector<VecR> xibar(static_cast<std::size_t>(K)), res(static_cast<std::size_t>(K));
  double xibar_sq = 0.0;
  for (int k = 0; k < K; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    Eigen::LLT<MatR> llt(emb.delta[kk]);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("Cholesky factorization failed: statistics of UE " + std::to_string(k) +
                               " are not positive definite");
    x[kk] = llt.matrixU();
    xibar[kk] = llt.matrixL().solve(emb.xi[kk]);
    res[kk] = xibar[kk] - x[kk] * a.segment(k * n2, n2);
    xibar_sq += xibar[kk].squaredNorm();
  }
  const SparsityPenalty pen{lambda, gamma};
  auto objective = [&]() {
    double f = -xibar_sq;
    for (const auto& r : res) f += r.squaredNorm();
    return f + lambda * a.lpNorm<1>() + gamma * group_penalty(a, K, L);
  };

  // G_l = X_l^T X_l is block diagonal with one 2x2 block per UE
  std::vector<MatR> gram(static_cast<std::size_t>(L), MatR(2 * K, 2));
  std::vector<double> step(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    auto& g = gram[static_cast<std::size_t>(l)];
    double max_diag = 0.0;
    for (int k = 0; k < K; ++k) {
      const MatR& d = emb.delta[static_cast<std::size_t>(k)];
      g(2 * k, 0) = d(l, l);
      g(2 * k, 1) = d(l, L + l);
      g(2 * k + 1, 0) = d(L + l, l);
      g(2 * k + 1, 1) = d(L + l, L + l);
      max_diag = std::max({max_diag, d(l, l), d(L + l, L + l)});
    }
    step[static_cast<std::size_t>(l)] = cfg.step_mu > 0.0 ? cfg.step_mu : 1.0 / (2.0 * max_diag);
  }

  SparseSolution sol;
  double f = objective();
  if (cfg.record_trace) sol.trace.push_back(f);
  const std::vector<std::vector<int>> groups = [&] {
    std::vector<std::vector<int>> g;
    for (int l = 0; l < L; ++l) g.push_back(group_indices(K, L, l));
    return g;
  }();

  VecR xl(2 * K), bl(2 * K), z(2 * K), z_prev(2 * K), y(2 * K), grad(2 * K), cand(2 * K);
  auto gmul = [&](const MatR& g, const VecR& v, VecR& out) {
    for (int k = 0; k < K; ++k) {
      out[2 * k] = g(2 * k, 0) * v[2 * k] + g(2 * k, 1) * v[2 * k + 1];
      out[2 * k + 1] = g(2 * k + 1, 0) * v[2 * k] + g(2 * k + 1, 1) * v[2 * k + 1];
    }
  };
  VecR tmp(2 * K);
  auto smooth = [&](const MatR& g, const VecR& v) {
    gmul(g, v, tmp);
    return v.dot(tmp) - 2.0 * v.dot(bl);
  };
  auto penalty = [&](const VecR& v) { return lambda * v.lpNorm<1>() + gamma * v.norm(); };

  while (sol.outer < cfg.n_max) {
    ++sol.outer;
    const double scale = std::max(std::abs(f), std::numeric_limits<double>::min());
    for (int l = 0; l < L; ++l) {
      const auto& idx = groups[static_cast<std::size_t>(l)];
      const MatR& g = gram[static_cast<std::size_t>(l)];
      for (int j = 0; j < 2 * K; ++j) xl[j] = a[idx[static_cast<std::size_t>(j)]];
      // b_l = X_l^T r_l with r_l = R + X_l x_l, held fixed during the inner solve
      gmul(g, xl, bl);
      for (int k = 0; k < K; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        bl[2 * k] += x[kk].col(l).dot(res[kk]);
        bl[2 * k + 1] += x[kk].col(L + l).dot(res[kk]);
      }
      double& mu = step[static_cast<std::size_t>(l)];
      z = xl;
      z_prev = xl;
      double h = smooth(g, z) + penalty(z);
      int n = 1;
      for (int it = 0; it < cfg.inner_max; ++it) {
        const double beta = static_cast<double>(n - 1) / (n + 2);
        y = z + beta * (z - z_prev);
        gmul(g, y, grad);
        grad = 2.0 * (grad - bl);
        const double gy = smooth(g, y);
        while (true) {
          cand = prox_composite(y - mu * grad, mu * lambda, mu * gamma);
          const VecR diff = cand - y;
          if (smooth(g, cand) <= gy + grad.dot(diff) + diff.squaredNorm() / (2.0 * mu) + 1e-15 * std::abs(gy)) break;
          mu *= 0.5;
          ++sol.backtracks;
        }
        double h_new = smooth(g, cand) + penalty(cand);
        check_finite(h_new, "solve_gw", sol.outer);
        if (h_new > h && beta > 0.0) {
          ++sol.restarts;
          n = 1;
          z_prev = z;
          continue;
        }
        ++sol.iterations;
        if (h_new > h) break;
        const bool stop = std::abs(h - h_new) <= cfg.tol * scale;
        z_prev = z;
        z = cand;
        h = h_new;
        ++n;
        if (stop) break;
      }
      for (int k = 0; k < K; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const double d0 = z[2 * k] - xl[2 * k];
        const double d1 = z[2 * k + 1] - xl[2 * k + 1];
        if (d0 != 0.0) res[kk] -= d0 * x[kk].col(l);
        if (d1 != 0.0) res[kk] -= d1 * x[kk].col(L + l);
      }
      for (int j = 0; j < 2 * K; ++j) a[idx[static_cast<std::size_t>(j)]] = z[j];
    }
    const double f_new = objective();
    check_finite(f_new, "solve_gw", sol.outer);
    if (cfg.record_trace) sol.trace.push_back(f_new);
    const bool stop = small_change(f, f_new, cfg.tol);
    f = f_new;
    if (stop) {
      sol.converged = true;
      break;
    }
  }
  return finish(emb, std::move(a), pen, std::move(sol));
}

SparseSolution warm_restart(const SparseSolveFn& solve, double lambda, double lambda_bar, double eta, const VecR& init) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0, 1)");
  if (lambda_bar < lambda) throw std::invalid_argument("lambda_bar must be >= lambda");
  double current = lambda_bar;
  VecR start = init;
  SparseSolution out;
  std::vector<double> lambdas;
  std::vector<long> iters;
  long total = 0;
  int restarts = 0;
  while (true) {
    out = solve(current, start);
    lambdas.push_back(current);
    iters.push_back(out.iterations);
    total += out.iterations;
    restarts += out.restarts;
    if (current == lambda) break;
    current = std::max(eta * current, lambda);
    start = out.a_r;
  }
  out.stage_lambdas = std::move(lambdas);
  out.stage_iterations = std::move(iters);
  out.iterations = total;
  out.restarts = restarts;
  return out;
}

SparseSolution warm_restart_ew(const RealEmbedding& emb, double lambda, const SolverConfig& cfg) {
  auto fn = [&](double lam, const VecR& init) { return solve_ew(emb, lam, cfg, &init); };
  return warm_restart(fn, lambda, cfg.lambda_bar_factor * lambda, cfg.eta, unpenalized_solution(emb));
}

SparseSolution warm_restart_gw(const RealEmbedding& emb, double lambda, double gamma, const SolverConfig& cfg) {
  auto fn = [&](double lam, const VecR& init) { return solve_gw(emb, lam, gamma, cfg, &init); };
  return warm_restart(fn, lambda, cfg.lambda_bar_factor * lambda, cfg.eta, unpenalized_solution(emb));
}

SparseSolution reference_oracle(const RealEmbedding& emb, double lambda, double gamma, const SolverConfig& cfg) {
  const int K = emb.K, L = emb.L, n2 = 2 * L;
  const SparsityPenalty pen{lambda, gamma};
  double lip = 0.0;
  for (const auto& d : emb.delta) lip = std::max(lip, 2.0 * max_eigenvalue(d));
  double mu = 1.0 / lip;
  std::vector<std::vector<int>> groups;
  if (gamma > 0.0)
    for (int l = 0; l < L; ++l) groups.push_back(group_indices(K, L, l));

  VecR a = VecR::Zero(emb.dim());
  VecR grad(emb.dim()), u(emb.dim()), a_new(emb.dim()), sub(2 * K);
  SparseSolution sol;
  double f = sparse_objective(emb, a, pen);
  const long budget = 100L * cfg.n_max;
  for (long it = 0; it < budget; ++it) {
    for (int k = 0; k < K; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      grad.segment(k * n2, n2) = 2.0 * (emb.delta[kk] * a.segment(k * n2, n2) - emb.xi[kk]);
    }
    u = a - mu * grad;
    if (gamma > 0.0) {
      for (const auto& idx : groups) {
        for (std::size_t j = 0; j < idx.size(); ++j) sub[static_cast<Eigen::Index>(j)] = u[idx[j]];
        sub = prox_composite(sub, mu * lambda, mu * gamma);
        for (std::size_t j = 0; j < idx.size(); ++j) a_new[idx[j]] = sub[static_cast<Eigen::Index>(j)];
      }
    } else {
      a_new = prox_l1(u, mu * lambda);
    }
    const double f_new = sparse_objective(emb, a_new, pen);
    check_finite(f_new, "reference_oracle", static_cast<int>(std::min<long>(it, std::numeric_limits<int>::max())));
    ++sol.iterations;
    if (f_new > f + 1e-14 * std::abs(f)) {
      mu *= 0.5;
      ++sol.backtracks;
      continue;
    }
    const double step_norm = (a_new - a).lpNorm<Eigen::Infinity>();
    a.swap(a_new);
    f = std::min(f, f_new);
    if (cfg.record_trace && (sol.iterations & 0x3ff) == 0) sol.trace.push_back(f);
    if (step_norm <= 1e-14 * std::max(a.lpNorm<Eigen::Infinity>(), std::numeric_limits<double>::min())) {
      sol.converged = true;
      break;
    }
  }
  sol.outer = static_cast<int>(std::min<long>(sol.iterations, std::numeric_limits<int>::max()));
  return finish(emb, std::move(a), pen, std::move(sol));
}

VecR grid_oracle(const RealEmbedding& emb, double lambda, double gamma, int points_per_axis, double resolution) {
  const int d = emb.dim();
  if (d > 4) throw std::invalid_argument("grid oracle is limited to 4 real dimensions");
  if (points_per_axis < 3) throw std::invalid_argument("grid oracle needs at least 3 points per axis");
  const SparsityPenalty pen{lambda, gamma};
  // every minimizer lies in the Δ-ball around the unpenalized solution of radius ||a_u||_Δ
  const VecR a_u = unpenalized_solution(emb);
  double energy = 0.0, min_eig = std::numeric_limits<double>::infinity();
  for (int k = 0; k < emb.K; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const VecR seg = a_u.segment(k * 2 * emb.L, 2 * emb.L);
    energy += seg.dot(emb.delta[kk] * seg);
    Eigen::SelfAdjointEigenSolver<MatR> es(emb.delta[kk]);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  VecR center = a_u;
  double half = 1.01 * std::sqrt(energy / min_eig) + 1e-12;
  const double stop = resolution * half;
  long total = 1;
  for (int i = 0; i < d; ++i) total *= points_per_axis;
  VecR point(d), best = center;
  while (true) {
    const double h = 2.0 * half / (points_per_axis - 1);
    double best_f = std::numeric_limits<double>::infinity();
    for (long idx = 0; idx < total; ++idx) {
      long rem = idx;
      for (int i = 0; i < d; ++i) {
        point[i] = center[i] - half + h * static_cast<double>(rem % points_per_axis);
        rem /= points_per_axis;
      }
      const double fv = sparse_objective(emb, point, pen);
      if (fv < best_f) {
        best_f = fv;
        best = point;
      }
    }
    center = best;
    if (h <= stop) break;
    half = 3.0 * h;
  }
  return best;
}

ExtractedAssociation extract_association(const std::vector<VecC>& a, const RealEmbedding& emb,
                                         const std::vector<VecC>& reference) {
  const int K = emb.K, L = emb.L;
  ExtractedAssociation out;
  out.a = a;
  std::vector<std::vector<int>> serving(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    for (int l = 0; l < L; ++l)
      if (a[kk][l].real() != 0.0 || a[kk][l].imag() != 0.0) serving[kk].push_back(l);
    if (!serving[kk].empty()) continue;
    int best = 0;
    reference[kk].cwiseAbs().maxCoeff(&best);
    const MatR& d = emb.delta[kk];
    Eigen::Matrix2d g;
    g << d(best, best), d(best, L + best), d(L + best, best), d(L + best, L + best);
    const Eigen::Vector2d rhs(emb.xi[kk][best], emb.xi[kk][L + best]);
    const Eigen::Vector2d w = g.ldlt().solve(rhs);
    out.a[kk][best] = cplx(w[0], w[1]);
    serving[kk].push_back(best);
    out.fallback_ues.push_back(k);
  }
  out.assoc = Association::from_serving(L, std::move(serving));
  return out;
}

RandomInstance random_instance(int K, int L, Rng& rng) {
  constexpr int kAntennas = 4;
  RandomInstance inst;
  inst.p.resize(K);
  MatR beta(K, L);
  for (int k = 0; k < K; ++k) {
    inst.p[k] = rng.uniform(0.02, 0.1);
    for (int l = 0; l < L; ++l) beta(k, l) = std::pow(10.0, rng.uniform(-3.0, 2.0));
  }
  auto& s = inst.stats;
  s.K = K;
  s.L = L;
  s.noise_var = 1.0;
  for (int k = 0; k < K; ++k) {
    VecC m(L);
    for (int l = 0; l < L; ++l) m[l] = std::sqrt(kAntennas * beta(k, l)) * std::polar(1.0, rng.uniform(-kPi, kPi));
    VecR leak = VecR::Zero(L);
    for (int i = 0; i < K; ++i)
      if (i != k) leak += 0.05 * inst.p[i] * kAntennas * beta.row(i).transpose();
    MatC w(L, L);
    for (int r = 0; r < L; ++r)
      for (int c = 0; c < L; ++c) w(r, c) = rng.complex_normal();
    MatC d = MatC::Identity(L, L);
    d.diagonal() += leak.cast<cplx>();
    d += inst.p[k] * m * m.adjoint();
    d += (0.1 / L) * w * w.adjoint();
    s.delta.push_back(hermitian_part(d));
    s.xi.push_back(std::sqrt(inst.p[k]) * m);
  }
  return inst;
}

}  // namespace cfmimo
