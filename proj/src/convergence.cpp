// SPDX-License-Identifier: Apache-2.0

#include "cfmimo/convergence.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "json_fields.hpp"

namespace cfmimo {

using nlohmann::json;

void BenchConfig::validate() const {
  if (instances < 1) throw std::invalid_argument("instances must be >= 1");
  if (K < 1 || L < 1) throw std::invalid_argument("K and L must be >= 1");
  if (lambdas.empty()) throw std::invalid_argument("lambdas must not be empty");
  for (double l : lambdas)
    if (!(l >= 0.0)) throw std::invalid_argument("lambdas: values must be >= 0");
  for (double g : gammas)
    if (!(g >= 0.0)) throw std::invalid_argument("gammas: values must be >= 0");
  if (solver.n_max < 1 || solver.inner_max < 1) throw std::invalid_argument("solver iteration caps must be >= 1");
  if (!(solver.tol > 0.0)) throw std::invalid_argument("solver.tol must be > 0");
}

BenchConfig bench_from_json(const json& j) {
  BenchConfig b;
  detail::FieldReader r(j, "");
  r.read("instances", b.instances);
  r.read("K", b.K);
  r.read("L", b.L);
  r.read("lambdas", b.lambdas);
  r.read("gammas", b.gammas);
  r.read("seed", b.seed);
  r.read("warm_restart", b.warm_restart);
  detail::with_object(r, "solver", [&](detail::FieldReader& v) {
    v.read("step_mu", b.solver.step_mu);
    v.read("n_max", b.solver.n_max);
    v.read("inner_max", b.solver.inner_max);
    v.read("tol", b.solver.tol);
    v.read("eta", b.solver.eta);
    v.read("lambda_bar_factor", b.solver.lambda_bar_factor);
  });
  r.finish();
  b.solver.record_trace = true;
  b.validate();
  return b;
}

BenchConfig load_bench(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open bench file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return bench_from_json(j);
}

json to_json(const ConvergenceRecord& r) {
  return {{"instance", r.instance},   {"solver", r.solver},         {"lambda", r.lambda},
          {"gamma", r.gamma},         {"f_star", r.f_star},         {"objective", r.objective},
          {"final_gap", r.final_gap}, {"iterations", r.iterations}, {"outer", r.outer},
          {"converged", r.converged}, {"wall_ms", r.wall_ms},       {"gap_trace", r.gap_trace}};
}

double relative_gap(double f, double f_star) {
  const double scale = std::abs(f_star);
  return scale > 0.0 ? (f - f_star) / scale : f - f_star;
}

namespace {

ConvergenceRecord make_record(int instance, const char* solver, double lambda, double gamma, double f_star,
                              const SparseSolution& sol, double wall_ms) {
  ConvergenceRecord r;
  r.instance = instance;
  r.solver = solver;
  r.lambda = lambda;
  r.gamma = gamma;
  r.f_star = f_star;
  r.objective = sol.objective;
  r.final_gap = relative_gap(sol.objective, f_star);
  r.iterations = sol.iterations;
  r.outer = sol.outer;
  r.converged = sol.converged;
  r.wall_ms = wall_ms;
  r.gap_trace.reserve(sol.trace.size());
  for (double f : sol.trace) r.gap_trace.push_back(relative_gap(f, f_star));
  return r;
}

template <typename Fn>
SparseSolution timed(Fn fn, double& wall_ms) {
  const auto t0 = std::chrono::steady_clock::now();
  SparseSolution s = fn();
  wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

}  // namespace

std::vector<ConvergenceRecord> convergence_report(const BenchConfig& cfg,
                                                  const std::function<void(const ConvergenceRecord&)>& on_record) {
  cfg.validate();
  std::vector<ConvergenceRecord> out;
  auto emit = [&](ConvergenceRecord r) {
    if (on_record) on_record(r);
    out.push_back(std::move(r));
  };
  SolverConfig sc = cfg.solver;
  sc.record_trace = true;
  for (int i = 0; i < cfg.instances; ++i) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    const RandomInstance inst = random_instance(cfg.K, cfg.L, rng);
    const RealEmbedding emb = embed(inst.stats, inst.p);
    for (double g : cfg.gammas) {
      for (double l : cfg.lambdas) {
        double ms = 0.0;
        const SparseSolution oracle = timed([&] { return reference_oracle(emb, l, g, sc); }, ms);
        const double f_star = oracle.objective;
        emit(make_record(i, "oracle", l, g, f_star, oracle, ms));
        if (g == 0.0) {
          const SparseSolution ew =
              timed([&] { return cfg.warm_restart ? warm_restart_ew(emb, l, sc) : solve_ew(emb, l, sc); }, ms);
          emit(make_record(i, "EW", l, g, f_star, ew, ms));
        }
        const SparseSolution gw =
            timed([&] { return cfg.warm_restart ? warm_restart_gw(emb, l, g, sc) : solve_gw(emb, l, g, sc); }, ms);
        emit(make_record(i, "GW", l, g, f_star, gw, ms));
      }
    }
  }
  return out;
}

void write_convergence(const std::vector<ConvergenceRecord>& records, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream nd(dir / "convergence.ndjson");
  std::ofstream csv(dir / "convergence.csv");
  std::ofstream tr(dir / "traces.csv");
  if (!nd || !csv || !tr) throw std::runtime_error("cannot write convergence tables into " + dir.string());
  csv << std::setprecision(12);
  tr << std::setprecision(12);
  csv << "instance,solver,lambda,gamma,f_star,objective,final_gap,iterations,outer,converged,wall_ms\n";
  tr << "instance,solver,lambda,gamma,iteration,gap\n";
  for (const auto& r : records) {
    nd << to_json(r).dump() << '\n';
    csv << r.instance << ',' << r.solver << ',' << r.lambda << ',' << r.gamma << ',' << r.f_star << ','
        << r.objective << ',' << r.final_gap << ',' << r.iterations << ',' << r.outer << ','
        << (r.converged ? 1 : 0) << ',' << r.wall_ms << '\n';
    for (std::size_t t = 0; t < r.gap_trace.size(); ++t)
      tr << r.instance << ',' << r.solver << ',' << r.lambda << ',' << r.gamma << ',' << t + 1 << ','
         << r.gap_trace[t] << '\n';
  }
}

}  // namespace cfmimo
