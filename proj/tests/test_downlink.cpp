// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "cfmimo/downlink.hpp"
#include "cfmimo/sparse.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cfmimo;
using testing::alignment;
using testing::random_vec;
using testing::simulate_network;

namespace {

std::vector<VecC> unit_dense_lsfd(const LsfMoments& m, const VecR& p) {
  auto a = olsfd(lsf_statistics(m, p, 1.0), p).a;
  for (auto& v : a) v.normalize();
  return a;
}

DownlinkPowerParams params() {
  DownlinkPowerParams d;
  d.rho_max = 0.2;
  return d;
}

}  // namespace

TEST_CASE("precoders are the combiners") {
  Rng rng(1);
  const VecC v = random_vec(4, rng);
  CHECK(&precoder_from_combiner(v) == &v);
}

TEST_CASE("zero precoding gives zero downlink SINR") {
  const auto net = simulate_network(3, 2, 2, 2, 200, 2);
  const std::vector<VecC> b(2, VecC::Zero(3));
  for (const auto& s : downlink_sinr(b, net.moments, 1.0)) CHECK(s.value == 0.0);
  CHECK(downlink_se(1.0, 190, 200) == doctest::Approx(0.95));
}

TEST_CASE("single-UE downlink SINR equals the virtual uplink SINR at equal power") {
  const auto net = simulate_network(4, 1, 2, 1, 500, 3);
  const auto a = unit_dense_lsfd(net.moments, net.p);
  const double p = net.p[0];
  const double ul = uplink_sinr(a[0], lsf_statistics(net.moments, net.p, 1.0), 0).value;
  const double dl = downlink_sinr({std::sqrt(p) * a[0]}, net.moments, 1.0)[0].value;
  CHECK(dl == doctest::Approx(ul).epsilon(1e-10));
}

TEST_CASE("common precoder scaling raises every downlink SINR") {
  const auto net = simulate_network(5, 3, 2, 2, 500, 4);
  const auto a = unit_dense_lsfd(net.moments, net.p);
  std::vector<double> prev(3, -1.0);
  for (double alpha : {0.01, 0.1, 1.0, 10.0}) {
    std::vector<VecC> b;
    for (const auto& v : a) b.push_back(alpha * v);
    const auto s = downlink_sinr(b, net.moments, 1.0);
    for (int k = 0; k < 3; ++k) {
      CHECK(s[k].value > prev[k]);
      prev[k] = s[k].value;
    }
  }
}

TEST_CASE("duality with a single UE returns the uplink power") {
  const auto net = simulate_network(4, 1, 2, 1, 500, 5);
  const auto d = duality_power_allocation(unit_dense_lsfd(net.moments, net.p), net.moments, net.p, 1.0);
  CHECK(d.feasible);
  CHECK(d.rho[0] == doctest::Approx(net.p[0]).epsilon(1e-10));
}

TEST_CASE("duality is symmetric under UE relabeling") {
  Rng rng(6);
  const int L = 3;
  LsfMoments m;
  m.K = 2;
  m.L = L;
  m.n_mc = 1;
  const VecC f = random_vec(L, rng);
  const MatC own = testing::random_pd(L, rng, 0.5, 1.0) + f * f.adjoint();
  const MatC cross = testing::random_pd(L, rng, 0.05, 0.2);
  m.first = {f, f};
  m.second = {own, cross, cross, own};
  const VecR p = VecR::Constant(2, 0.1);
  const auto d = duality_power_allocation(unit_dense_lsfd(m, p), m, p, 1.0);
  CHECK(d.feasible);
  CHECK(d.rho[0] == doctest::Approx(d.rho[1]).epsilon(1e-12));
}

TEST_CASE("duality reproduces the uplink SINRs within the uplink budget") {
  const auto net = simulate_network(6, 3, 2, 2, 1000, 7);
  const auto a = unit_dense_lsfd(net.moments, net.p);
  const auto d = duality_power_allocation(a, net.moments, net.p, 1.0);
  REQUIRE(d.feasible);
  std::vector<VecC> b;
  for (int k = 0; k < 3; ++k) b.push_back(std::sqrt(d.rho[k]) * a[k]);
  const auto s = downlink_sinr(b, net.moments, 1.0);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(s[k].value - d.target[k]) <= 1e-8 * d.target[k]);
  CHECK(d.rho.sum() <= net.p.sum() + 1e-9);
  CHECK((d.rho.array() >= 0.0).all());

  // Fixed-point iteration of the balance equations converges to the same powers.
  VecR rho = net.p;
  for (int it = 0; it < 2000; ++it) {
    VecR next(3);
    for (int k = 0; k < 3; ++k) {
      const double sig = std::norm(a[k].dot(net.moments.first[k]));
      double interf = 1.0;
      for (int i = 0; i < 3; ++i) interf += rho[i] * a[i].dot(net.moments.M2(i, k) * a[i]).real();
      interf -= rho[k] * sig;
      next[k] = d.target[k] * interf / sig;
    }
    rho = next;
  }
  CHECK(testing::rel_diff(rho, d.rho) < 1e-8);
}

TEST_CASE("V-LSFP follows the dense virtual LSFD with the planned power") {
  const auto net = simulate_network(6, 3, 2, 2, 500, 8);
  const auto stats = lsf_statistics(net.moments, net.p, 1.0);
  const auto sol = vlsfp_scheme(stats, net.geometry.beta, params());
  for (int k = 0; k < 3; ++k) {
    const VecC ref = stats.delta[k].ldlt().solve(stats.xi[k]);
    CHECK(alignment(sol.b[k], ref) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.b[k].squaredNorm() == doctest::Approx(sol.rho[k]).epsilon(1e-12));
    CHECK(sol.omega[k].norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(per_ap_excess(sol, params().rho_max) <= 1e-9);
}

TEST_CASE("centralized allocation examples") {
  DownlinkPowerParams d = params();
  MatR beta(1, 1);
  beta << 50.0;
  const auto one = centralized_power_allocation(beta, {VecC::Ones(1)}, Association::dense(1, 1), d);
  CHECK(one[0] == doctest::Approx(d.rho_max).epsilon(1e-14));

  d.kappa = 0.0;
  d.power_mu = 0.0;
  MatR b2(3, 2);
  b2 << 10.0, 2.0, 1.0, 7.0, 3.0, 3.0;
  std::vector<VecC> omega(3, VecC::Constant(2, 1.0 / std::sqrt(2.0)));
  const auto eq = centralized_power_allocation(b2, omega, Association::dense(3, 2), d);
  CHECK(eq[0] == doctest::Approx(eq[1]).epsilon(1e-14));
  CHECK(eq[1] == doctest::Approx(eq[2]).epsilon(1e-14));

  CHECK_THROWS_AS(centralized_power_allocation(b2, omega, Association::from_serving(2, {{0}, {}, {1}}), d),
                  std::invalid_argument);
}

TEST_CASE("centralized allocation passes the per-AP audit on random drops") {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const int K = 6, L = 8;
    MatR beta(K, L);
    std::vector<std::vector<int>> serving(K);
    std::vector<VecC> omega;
    for (int k = 0; k < K; ++k) {
      for (int l = 0; l < L; ++l) {
        beta(k, l) = std::pow(10.0, rng.uniform(0.0, 6.0));
        if (rng.uniform(0.0, 1.0) < 0.5 || l == k) serving[k].push_back(l);
      }
      VecC w = VecC::Zero(L);
      for (int l : serving[k]) w[l] = rng.complex_normal();
      omega.push_back(w.normalized());
    }
    const auto assoc = Association::from_serving(L, serving);
    const auto rho = centralized_power_allocation(beta, omega, assoc, params());
    const auto sol = make_lsfp(omega, rho, assoc);
    CHECK(per_ap_excess(sol, params().rho_max) <= 1e-9);
    CHECK((rho.array() >= 0.0).all());
  }
}

TEST_CASE("distributed allocation examples") {
  MatR beta(4, 2);
  beta << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0;
  const auto dense = Association::dense(4, 2);
  const MatR eq = distributed_fpa(beta, dense, 0.0, 0.2);
  for (int k = 0; k < 4; ++k) CHECK(eq(k, 0) == doctest::Approx(0.05));
  const MatR r = distributed_fpa(beta, dense, 0.5, 0.2);
  for (int l = 0; l < 2; ++l) CHECK(std::abs(r.col(l).sum() - 0.2) <= 1e-12);
  const auto single = Association::from_serving(2, {{0}, {}, {}, {1}});
  const MatR s = distributed_fpa(beta, single, 0.5, 0.2);
  CHECK(s(0, 0) == 0.2);
  CHECK(s(3, 1) == 0.2);
  CHECK(s(1, 0) == 0.0);
}

TEST_CASE("scheme catalog relations") {
  const auto net = simulate_network(5, 3, 2, 2, 500, 10);
  const auto stats = lsf_statistics(net.moments, net.p, 1.0);
  const MatR& beta = net.geometry.beta;
  const auto dense = Association::dense(3, 5);

  const auto fpa = fpa_scheme(beta, dense, params());
  const auto hfpa = hfpa_scheme(beta, dense, params());
  for (int k = 0; k < 3; ++k) {
    CHECK(testing::rel_diff(fpa.omega[k], hfpa.omega[k]) < 1e-14);
    CHECK(fpa.omega[k].norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(per_ap_excess(fpa, params().rho_max) <= 1e-9);
  CHECK(per_ap_excess(hfpa, params().rho_max) <= 1e-9);

  // Without sparsity the sparse solution is the dense virtual LSFD.
  const auto emb = embed(stats, net.p);
  SolverConfig cfg;
  cfg.record_trace = false;
  const auto sparse = solve_ew(emb, 0.0, cfg);
  const auto slsfp = slsfp_scheme(sparse.a, dense, beta, params());
  const auto vlsfp = vlsfp_scheme(stats, beta, params());
  for (int k = 0; k < 3; ++k) CHECK(testing::rel_diff(slsfp.omega[k], vlsfp.omega[k]) < 1e-8);
  const auto sv = svlsfp_scheme(stats, dense, beta, params());
  for (int k = 0; k < 3; ++k) CHECK(alignment(sv.omega[k], vlsfp.omega[k]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a single UE gets collinear precoding from every scheme") {
  const auto net = simulate_network(1, 1, 4, 1, 500, 11);
  const auto stats = lsf_statistics(net.moments, net.p, 1.0);
  const MatR& beta = net.geometry.beta;
  const auto assoc = Association::dense(1, 1);
  SolverConfig cfg;
  cfg.record_trace = false;
  const auto sparse = solve_ew(embed(stats, net.p), 0.01, cfg);
  const std::vector<LsfpSolution> all{fpa_scheme(beta, assoc, params()),
                                      hfpa_scheme(beta, assoc, params()),
                                      vlsfp_scheme(stats, beta, params()),
                                      plsfp_scheme(net.moments, 1.0, beta, assoc, params()),
                                      slsfp_scheme(sparse.a, assoc, beta, params()),
                                      svlsfp_scheme(stats, assoc, beta, params())};
  for (const auto& s : all) CHECK(alignment(s.b[0], all[0].b[0]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("downlink scheme names") {
  for (auto s : {DownlinkScheme::FPA, DownlinkScheme::HFPA, DownlinkScheme::VLSFP, DownlinkScheme::PLSFP,
                 DownlinkScheme::SLSFP, DownlinkScheme::SVLSFP})
    CHECK(downlink_scheme_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(downlink_scheme_from_string("MMSE"), std::invalid_argument);
}
