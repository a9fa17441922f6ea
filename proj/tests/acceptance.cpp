// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include "cfmimo/downlink.hpp"
#include "cfmimo/power.hpp"
#include "cfmimo/scenario.hpp"
#include "cfmimo/sparse.hpp"
#include "cfmimo/summary.hpp"
#include "helpers.hpp"

using namespace cfmimo;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("criterion %2d %s: %s (%s) [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
              seconds_since(t0));
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

SolverConfig quiet_solver() {
  SolverConfig c;
  c.record_trace = false;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int hardware_threads() { return std::max(1, static_cast<int>(std::thread::hardware_concurrency())); }

// 1: solver accuracy at full scale.
Outcome solver_accuracy() {
  const int instances = 50, K = 20, L = 40;
  const std::vector<double> lambdas{1e-4, 1e-2, 1e-1}, gammas{0.0, 1e-2};
  const SolverConfig cfg = quiet_solver();
  double worst_gap = -1e300, worst_time = 0.0;
  for (int i = 0; i < instances; ++i) {
    Rng rng(derive_seed(2024, static_cast<std::uint64_t>(i)));
    const auto inst = random_instance(K, L, rng);
    const auto emb = embed(inst.stats, inst.p);
    double solve_time = 0.0;
    for (double g : gammas) {
      for (double l : lambdas) {
        const double f_star = reference_oracle(emb, l, g, cfg).objective;
        auto t0 = Clock::now();
        if (g == 0.0) {
          const double f = solve_ew(emb, l, cfg).objective;
          worst_gap = std::max(worst_gap, (f - f_star) / std::abs(f_star));
        }
        const double f = solve_gw(emb, l, g, cfg).objective;
        worst_gap = std::max(worst_gap, (f - f_star) / std::abs(f_star));
        solve_time += seconds_since(t0);
      }
    }
    worst_time = std::max(worst_time, solve_time);
  }
  return {worst_gap <= 1e-4 && worst_time < 10.0,
          fmt("worst relative gap %.3e", worst_gap) + fmt(", slowest instance %.3f s", worst_time)};
}

// 2: prox operators against grid search.
Outcome prox_oracles() {
  const double h = 1e-3;
  Rng rng(99);
  double worst = 0.0;
  auto grid = [&](const VecR& u, const std::function<double(const VecR&)>& pen) {
    const int n = static_cast<int>(u.size());
    const double lim = u.cwiseAbs().maxCoeff() + 0.1;
    const int steps = static_cast<int>(2.0 * lim / h) + 1;
    VecR best = VecR::Zero(n), x(n);
    double best_f = 1e300;
    for (int i = 0; i < steps; ++i)
      for (int j = 0; j < (n == 2 ? steps : 1); ++j) {
        x[0] = -lim + i * h;
        if (n == 2) x[1] = -lim + j * h;
        const double f = 0.5 * (x - u).squaredNorm() + pen(x);
        if (f < best_f) best_f = f, best = x;
      }
    return best;
  };
  for (int t = 0; t < 12; ++t) {
    const int n = 1 + t % 2;
    VecR u(n);
    for (int i = 0; i < n; ++i) u[i] = rng.uniform(-1.5, 1.5);
    const double tl = rng.uniform(0.0, 0.8), tg = rng.uniform(0.0, 0.8);
    worst = std::max(worst, (prox_l1(u, tl) - grid(u, [&](const VecR& x) { return tl * x.lpNorm<1>(); }))
                                .lpNorm<Eigen::Infinity>());
    worst = std::max(worst,
                     (prox_l2(u, tg) - grid(u, [&](const VecR& x) { return tg * x.norm(); })).lpNorm<Eigen::Infinity>());
    worst = std::max(worst, (prox_composite(u, tl, tg) -
                             grid(u, [&](const VecR& x) { return tl * x.lpNorm<1>() + tg * x.norm(); }))
                                .lpNorm<Eigen::Infinity>());
  }
  return {worst <= h, fmt("worst deviation from grid argmin %.2e", worst)};
}

// 3: optimality of the dense LSFD and its MSE characterization.
Outcome olsfd_optimality() {
  Rng rng(3);
  double worst_gain = -1e300, worst_mse = 0.0;
  const double steps[] = {1e-4, 1e-3, 1e-2, 1e-1};
  for (int t = 0; t < 100; ++t) {
    const int L = 1 + t % 8;
    const double p = rng.uniform(0.01, 0.2);
    const VecC xi = testing::random_vec(L, rng);
    const MatC delta = testing::random_pd(L, rng, 0.1, 5.0) + p * xi * xi.adjoint();
    LsfStatistics st;
    st.K = 1;
    st.L = L;
    st.delta = {delta};
    st.xi = {std::sqrt(p) * xi};
    const VecC a = olsfd(st, VecR::Constant(1, p)).a[0];
    const double best = uplink_sinr(a, st, 0).value;
    for (int d = 0; d < 100; ++d) {
      const VecC dir = testing::random_vec(L, rng).normalized();
      for (double s : steps)
        worst_gain = std::max(worst_gain, (uplink_sinr(a + s * a.norm() * dir, st, 0).value - best) / best);
    }
    // Stationary point of the MSE, solved independently by full-pivot LU.
    const VecC a_mse = std::sqrt(p) * delta.fullPivLu().solve(st.xi[0]);
    worst_mse = std::max(worst_mse, testing::rel_diff(a, a_mse));
  }
  return {worst_gain <= 1e-9 && worst_mse <= 1e-9,
          fmt("largest relative SINR gain %.2e", worst_gain) + fmt(", MSE minimizer deviation %.2e", worst_mse)};
}

// 4: uplink-downlink duality on simulated moments.
Outcome duality() {
  Rng pick(4);
  double worst = 0.0, worst_budget = -1e300;
  int infeasible = 0;
  for (int t = 0; t < 20; ++t) {
    const int K = 2 + static_cast<int>(pick.uniform(0.0, 4.0));
    const int L = 2 + static_cast<int>(pick.uniform(0.0, 9.0));
    const auto net = testing::simulate_network(L, K, 2, std::max(1, K - 1), 300, 400 + static_cast<std::uint64_t>(t));
    auto a = olsfd(lsf_statistics(net.moments, net.p, 1.0), net.p).a;
    for (auto& v : a) v.normalize();
    const auto d = duality_power_allocation(a, net.moments, net.p, 1.0);
    if (!d.feasible) ++infeasible;
    std::vector<VecC> b;
    for (int k = 0; k < K; ++k) b.push_back(std::sqrt(d.rho[k]) * a[k]);
    const auto s = downlink_sinr(b, net.moments, 1.0);
    for (int k = 0; k < K; ++k) worst = std::max(worst, std::abs(s[k].value - d.target[k]) / d.target[k]);
    worst_budget = std::max(worst_budget, d.rho.sum() - net.p.sum());
  }
  return {infeasible == 0 && worst <= 1e-6 && worst_budget <= 1e-9,
          fmt("worst SINR mismatch %.2e", worst) + fmt(", budget excess %.2e W", worst_budget) +
              fmt(", infeasible %.0f", infeasible)};
}

// 5-7 share one desk-scale run.
struct DeskRun {
  std::vector<SummaryRow> rows;
  std::string error;

  const SummaryRow* find(const std::string& scheme, std::optional<double> lambda = {}) const {
    for (const auto& r : rows)
      if (r.scheme == scheme && r.lambda == lambda && (!r.gamma || *r.gamma == 0.0)) return &r;
    return nullptr;
  }
};

const DeskRun& desk_run() {
  static const DeskRun run = [] {
    DeskRun d;
    try {
      Scenario s = load_scenario(fs::path(CFMIMO_SOURCE_DIR) / "scenarios" / "desk_l40_n4.json");
      s.lambdas = {0.0, 1e-4, 1e-2, 1e-1};
      s.gammas = {0.0};
      s.uplink_schemes = {"O-LSFD", "S-LSFD"};
      s.downlink_schemes = {"FPA", "H-FPA", "V-LSFP", "P-LSFP"};
      s.n_drops = 20;
      s.n_mc = 2000;
      s.n_mc_eval = 10000;
      const fs::path dir = fs::temp_directory_path() / "cfmimo_acceptance_desk";
      fs::remove_all(dir);
      RunOptions opts;
      opts.out_dir = dir;
      opts.threads = hardware_threads();
      run_scenario(s, opts);
      d.rows = summarize_records(load_records(dir / "results.ndjson"));
      fs::remove_all(dir);
    } catch (const std::exception& e) {
      d.error = e.what();
    }
    return d;
  }();
  return run;
}

Outcome headline_uplink() {
  const auto& d = desk_run();
  if (!d.error.empty()) return {false, d.error};
  const auto* o = d.find("O-LSFD");
  const auto* s = d.find("S-LSFD", 1e-1);
  if (!o || !s) return {false, "missing rows"};
  const double ee = s->mean_ee / o->mean_ee, se = s->mean_se / o->mean_se;
  return {ee >= 2.5 && se >= 0.95, fmt("EE ratio %.3f (need >= 2.5)", ee) + fmt(", SE ratio %.4f (need >= 0.95)", se)};
}

Outcome sparsity_trend() {
  const auto& d = desk_run();
  if (!d.error.empty()) return {false, d.error};
  std::string detail = "mean |M_k|:";
  double prev = 1e300;
  bool ok = true;
  for (double l : {0.0, 1e-4, 1e-2, 1e-1}) {
    const auto* r = d.find("S-LSFD", l);
    if (!r) return {false, "missing rows"};
    detail += fmt(" %.2f", r->mean_serving_aps);
    ok = ok && r->mean_serving_aps <= prev + 0.5;
    prev = r->mean_serving_aps;
  }
  return {ok, detail};
}

Outcome downlink_ordering() {
  const auto& d = desk_run();
  if (!d.error.empty()) return {false, d.error};
  const auto* fpa = d.find("FPA");
  const auto* hfpa = d.find("H-FPA");
  const auto* v = d.find("V-LSFP");
  const auto* p = d.find("P-LSFP");
  if (!fpa || !hfpa || !v || !p) return {false, "missing rows"};
  const double f = fpa->se_95_likely, h = hfpa->se_95_likely, vv = v->se_95_likely, pp = p->se_95_likely;
  const bool ok = f < h && h <= vv && h <= pp && h / f >= 1.2 && vv / f >= 1.3;
  return {ok, fmt("95%%-likely SE FPA %.3f", f) + fmt(", H-FPA %.3f", h) + fmt(", V-LSFP %.3f", vv) +
                  fmt(", P-LSFP %.3f", pp) + fmt("; H-FPA/FPA %.3f", h / f) + fmt(", V-LSFP/FPA %.3f", vv / f)};
}

// 8: conservation and normalization identities.
Outcome conservation() {
  double per_ap = -1e300, fpa_sum = 0.0, omega = 0.0, trace = 0.0, additivity = 0.0;
  DownlinkPowerParams dl;
  dl.rho_max = 0.2;
  for (int t = 0; t < 5; ++t) {
    const int L = 12, K = 6;
    const auto net = testing::simulate_network(L, K, 4, 3, 300, 800 + static_cast<std::uint64_t>(t));
    for (int k = 0; k < K; ++k)
      for (int l = 0; l < L; ++l)
        trace = std::max(trace, std::abs(net.stats.at(k, l).trace().real() / 4.0 - net.geometry.beta(k, l)) /
                                    net.geometry.beta(k, l));
    const auto stats = lsf_statistics(net.moments, net.p, 1.0);
    const auto dcc = heuristic_dcc(net.geometry, net.pilots);
    const auto emb = embed(stats, net.p);
    const auto sparse = solve_ew(emb, 1e-2, quiet_solver());
    const auto extracted = extract_association(sparse.a, emb, olsfd(stats, net.p).a);
    const std::vector<LsfpSolution> schemes{
        fpa_scheme(net.geometry.beta, dcc, dl),
        hfpa_scheme(net.geometry.beta, dcc, dl),
        vlsfp_scheme(stats, net.geometry.beta, dl),
        plsfp_scheme(net.moments, 1.0, net.geometry.beta, dcc, dl),
        slsfp_scheme(extracted.a, extracted.assoc, net.geometry.beta, dl),
        svlsfp_scheme(stats, extracted.assoc, net.geometry.beta, dl)};
    for (const auto& s : schemes) {
      per_ap = std::max(per_ap, per_ap_excess(s, dl.rho_max));
      for (const auto& w : s.omega) omega = std::max(omega, std::abs(w.norm() - 1.0));
    }
    const MatR rho_kl = distributed_fpa(net.geometry.beta, dcc, dl.nu, dl.rho_max);
    for (int l = 0; l < L; ++l)
      if (!dcc.served[l].empty()) fpa_sum = std::max(fpa_sum, std::abs(rho_kl.col(l).sum() - dl.rho_max) / dl.rho_max);
    PowerModelParams pm;
    pm.tau_u = 0;
    pm.tau_d = 190;
    const auto pb = power_total(pm, 4, dcc, rho_kl, net.p, VecR::Zero(K), VecR::Constant(K, 2.0));
    additivity = std::max(additivity, std::abs(pb.total - (pb.ue.sum() + pb.ap.sum() + pb.fronthaul.sum() + pb.cpu)) /
                                          pb.total);
  }
  const bool ok = per_ap <= 1e-9 && fpa_sum <= 1e-12 && omega <= 1e-12 && trace <= 1e-9 && additivity <= 1e-12;
  return {ok, fmt("per-AP excess %.2e W", per_ap) + fmt(", FPA sum error %.2e", fpa_sum) +
                  fmt(", |omega| error %.2e", omega) + fmt(", trace error %.2e", trace) +
                  fmt(", additivity error %.2e", additivity)};
}

// 9: byte-identical reruns across thread counts.
Outcome determinism() {
  Scenario s = load_scenario(fs::path(CFMIMO_SOURCE_DIR) / "scenarios" / "smoke.json");
  s.n_drops = 4;
  std::vector<std::string> outputs;
  for (int threads : {1, 3, 1}) {
    const fs::path dir = fs::temp_directory_path() / ("cfmimo_acceptance_det_" + std::to_string(outputs.size()));
    fs::remove_all(dir);
    RunOptions opts;
    opts.out_dir = dir;
    opts.threads = threads;
    run_scenario(s, opts);
    outputs.push_back(slurp(dir / "results.ndjson"));
    fs::remove_all(dir);
  }
  const bool ok = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
  return {ok, fmt("%.0f bytes per run, threads 1/3/1", static_cast<double>(outputs[0].size()))};
}

// 10: warm restart matches the direct solve and needs fewer final-stage iterations.
Outcome warm_restart_check() {
  const SolverConfig cfg = quiet_solver();
  double worst = 0.0;
  std::string detail;
  bool faster = true;
  for (double gamma : {0.0, 1e-2}) {
    std::vector<double> warm_iters, cold_iters;
    for (int i = 0; i < 20; ++i) {
      Rng rng(derive_seed(1000, static_cast<std::uint64_t>(i)));
      const auto inst = random_instance(20, 40, rng);
      const auto emb = embed(inst.stats, inst.p);
      const double lambda = 1e-2;
      const auto direct = gamma == 0.0 ? solve_ew(emb, lambda, cfg) : solve_gw(emb, lambda, gamma, cfg);
      const auto warm = gamma == 0.0 ? warm_restart_ew(emb, lambda, cfg) : warm_restart_gw(emb, lambda, gamma, cfg);
      worst = std::max(worst, std::abs(warm.objective - direct.objective) / std::abs(direct.objective));
      warm_iters.push_back(static_cast<double>(warm.stage_iterations.back()));
      cold_iters.push_back(static_cast<double>(direct.iterations));
    }
    std::nth_element(warm_iters.begin(), warm_iters.begin() + 10, warm_iters.end());
    std::nth_element(cold_iters.begin(), cold_iters.begin() + 10, cold_iters.end());
    const double mw = warm_iters[10], mc = cold_iters[10];
    faster = faster && mw < mc;
    detail += (gamma == 0.0 ? "EW" : "; GW") + fmt(" median final-stage iterations %.0f", mw) +
              fmt(" vs cold %.0f", mc);
  }
  return {worst <= 1e-6 && faster, fmt("objective mismatch %.2e; ", worst) + detail};
}

}  // namespace

int main() {
  report(1, "solver accuracy against the reference optimum", solver_accuracy);
  report(2, "prox operators match grid search", prox_oracles);
  report(3, "dense LSFD optimality", olsfd_optimality);
  report(4, "uplink-downlink duality", duality);
  report(5, "sparse uplink EE gain with bounded SE loss", headline_uplink);
  report(6, "serving-set size decreases with lambda", sparsity_trend);
  report(7, "downlink scheme ordering", downlink_ordering);
  report(8, "conservation and normalization suite", conservation);
  report(9, "determinism across thread counts", determinism);
  report(10, "warm restart equivalence and speed-up", warm_restart_check);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
