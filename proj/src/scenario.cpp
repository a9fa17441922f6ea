// SPDX-License-Identifier: Apache-2.0

#include "cfmimo/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cfmimo/pilots.hpp"
#include "json_fields.hpp"
#include "cfmimo/power_control.hpp"

namespace cfmimo {

namespace {

using nlohmann::json;
using detail::FieldReader;
using detail::with_object;

const std::vector<std::string> kUplinkSchemes{"O-LSFD", "P-LSFD", "S-LSFD"};
const std::vector<std::string> kDownlinkSchemes{"FPA", "H-FPA", "V-LSFP", "P-LSFP", "S-LSFP", "SV-LSFP"};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void check_schemes(const std::vector<std::string>& names, const std::vector<std::string>& allowed, const char* field) {
  for (const auto& n : names)
    if (std::find(allowed.begin(), allowed.end(), n) == allowed.end())
      throw std::invalid_argument(std::string(field) + ": unknown scheme '" + n + "'");
}

}  // namespace

void Scenario::validate() const {
  network.validate();
  if (tau_p < 1 || tau_p >= tau_c) throw std::invalid_argument("frame.tau_p must satisfy 1 <= tau_p < tau_c");
  check_schemes(uplink_schemes, kUplinkSchemes, "uplink_schemes");
  check_schemes(downlink_schemes, kDownlinkSchemes, "downlink_schemes");
  for (double l : lambdas)
    if (!(l >= 0.0)) throw std::invalid_argument("lambdas: values must be >= 0");
  for (double g : gammas)
    if (!(g >= 0.0)) throw std::invalid_argument("gammas: values must be >= 0");
  if (n_drops < 1) throw std::invalid_argument("monte_carlo.n_drops must be >= 1");
  if (min_mc < 1) throw std::invalid_argument("monte_carlo.min_mc must be >= 1");
  if (n_calibration < 1) throw std::invalid_argument("monte_carlo.n_calibration must be >= 1");
  if (n_mc < min_mc) throw std::invalid_argument("monte_carlo.n_mc is below monte_carlo.min_mc");
  if (n_mc_eval < min_mc) throw std::invalid_argument("monte_carlo.n_mc_eval is below monte_carlo.min_mc");
  if (!(pilot_power_w > 0.0)) throw std::invalid_argument("uplink_power.pilot_power_w must be > 0");
  if (!(p_max_w > 0.0)) throw std::invalid_argument("uplink_power.p_max_w must be > 0");
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("uplink_power.theta must lie in [0, 1]");
  if (!(downlink.rho_max > 0.0)) throw std::invalid_argument("downlink_power.rho_max_w must be > 0");
  if (!(solver.eta > 0.0 && solver.eta < 1.0)) throw std::invalid_argument("solver.eta must lie in (0, 1)");
  if (!(solver.lambda_bar_factor >= 1.0)) throw std::invalid_argument("solver.lambda_bar_factor must be >= 1");
  if (solver.n_max < 1 || solver.inner_max < 1) throw std::invalid_argument("solver iteration caps must be >= 1");
  if (!(solver.tol > 0.0)) throw std::invalid_argument("solver.tol must be > 0");
  if (solver.step_mu < 0.0) throw std::invalid_argument("solver.step_mu must be >= 0");
  PowerModelParams pm = power;
  pm.tau_c = tau_c;
  pm.tau_p = tau_p;
  pm.tau_u = tau_c - tau_p;
  pm.tau_d = 0;
  pm.validate();
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  FieldReader r(j, "");
  r.read("name", s.name);
  r.read("seed", s.seed);
  with_object(r, "network", [&](FieldReader& n) {
    auto& c = s.network;
    n.read("num_aps", c.num_aps);
    n.read("antennas_per_ap", c.antennas_per_ap);
    n.read("num_ues", c.num_ues);
    n.read("area_side_m", c.area_side_m);
    n.read("pathloss_offset_db", c.pathloss_offset_db);
    n.read("pathloss_slope_db", c.pathloss_slope_db);
    n.read("shadowing_std_db", c.shadowing_std_db);
    n.read("min_distance_m", c.min_distance_m);
    n.read("asd_azimuth_deg", c.asd_azimuth_deg);
    n.read("asd_elevation_deg", c.asd_elevation_deg);
    n.read("use_elevation", c.use_elevation);
    n.read("ap_height_m", c.ap_height_m);
    n.read("ue_height_m", c.ue_height_m);
    n.read("bandwidth_hz", c.bandwidth_hz);
    n.read("noise_figure_db", c.noise_figure_db);
  });
  with_object(r, "frame", [&](FieldReader& f) {
    f.read("tau_c", s.tau_c);
    f.read("tau_p", s.tau_p);
  });
  std::string combiner = to_string(s.combiner);
  r.read("combiner", combiner);
  try {
    s.combiner = combiner_from_string(combiner);
  } catch (const std::invalid_argument& e) {
    r.fail("combiner", e.what());
  }
  r.read("uplink_schemes", s.uplink_schemes);
  r.read("downlink_schemes", s.downlink_schemes);
  r.read("lambdas", s.lambdas);
  r.read("gammas", s.gammas);
  with_object(r, "monte_carlo", [&](FieldReader& m) {
    m.read("n_drops", s.n_drops);
    m.read("n_calibration", s.n_calibration);
    m.read("n_mc", s.n_mc);
    m.read("n_mc_eval", s.n_mc_eval);
    m.read("min_mc", s.min_mc);
  });
  with_object(r, "uplink_power", [&](FieldReader& u) {
    u.read("pilot_power_w", s.pilot_power_w);
    u.read("p_max_w", s.p_max_w);
    u.read("theta", s.theta);
  });
  with_object(r, "downlink_power", [&](FieldReader& d) {
    d.read("rho_max_w", s.downlink.rho_max);
    d.read("nu", s.downlink.nu);
    d.read("vartheta", s.downlink.vartheta);
    d.read("kappa", s.downlink.kappa);
    d.read("power_mu", s.downlink.power_mu);
  });
  with_object(r, "power_model", [&](FieldReader& p) {
    auto& m = s.power;
    p.read("cpu_fixed_w", m.cpu_fixed_w);
    p.read("fronthaul_fixed_w", m.fronthaul_fixed_w);
    p.read("ue_circuit_w", m.ue_circuit_w);
    p.read("ap_circuit_w", m.ap_circuit_w);
    p.read("signaling_w", m.signaling_w);
    p.read("processing_w", m.processing_w);
    p.read("decoding_w_per_gbps", m.decoding_w_per_gbps);
    p.read("encoding_w_per_gbps", m.encoding_w_per_gbps);
    p.read("eta_ue", m.eta_ue);
    p.read("eta_ap", m.eta_ap);
    p.read("ap_sleep", m.ap_sleep);
  });
  with_object(r, "solver", [&](FieldReader& v) {
    v.read("step_mu", s.solver.step_mu);
    v.read("n_max", s.solver.n_max);
    v.read("inner_max", s.solver.inner_max);
    v.read("tol", s.solver.tol);
    v.read("eta", s.solver.eta);
    v.read("lambda_bar_factor", s.solver.lambda_bar_factor);
    v.read("warm_restart", s.warm_restart);
  });
  r.finish();
  s.power.bandwidth_hz = s.network.bandwidth_hz;
  s.power.pilot_power_w = s.pilot_power_w;
  s.solver.record_trace = false;
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return scenario_from_json(j);
}

json to_json(const Scenario& s) {
  json net = to_json(s.network);
  net.erase("rng_seed");
  const auto& m = s.power;
  return {
      {"name", s.name},
      {"seed", s.seed},
      {"network", net},
      {"frame", {{"tau_c", s.tau_c}, {"tau_p", s.tau_p}}},
      {"combiner", to_string(s.combiner)},
      {"uplink_schemes", s.uplink_schemes},
      {"downlink_schemes", s.downlink_schemes},
      {"lambdas", s.lambdas},
      {"gammas", s.gammas},
      {"monte_carlo",
       {{"n_drops", s.n_drops},
        {"n_calibration", s.n_calibration},
        {"n_mc", s.n_mc},
        {"n_mc_eval", s.n_mc_eval},
        {"min_mc", s.min_mc}}},
      {"uplink_power", {{"pilot_power_w", s.pilot_power_w}, {"p_max_w", s.p_max_w}, {"theta", s.theta}}},
      {"downlink_power",
       {{"rho_max_w", s.downlink.rho_max},
        {"nu", s.downlink.nu},
        {"vartheta", s.downlink.vartheta},
        {"kappa", s.downlink.kappa},
        {"power_mu", s.downlink.power_mu}}},
      {"power_model",
       {{"cpu_fixed_w", m.cpu_fixed_w},
        {"fronthaul_fixed_w", m.fronthaul_fixed_w},
        {"ue_circuit_w", m.ue_circuit_w},
        {"ap_circuit_w", m.ap_circuit_w},
        {"signaling_w", m.signaling_w},
        {"processing_w", m.processing_w},
        {"decoding_w_per_gbps", m.decoding_w_per_gbps},
        {"encoding_w_per_gbps", m.encoding_w_per_gbps},
        {"eta_ue", m.eta_ue},
        {"eta_ap", m.eta_ap},
        {"ap_sleep", m.ap_sleep}}},
      {"solver",
       {{"step_mu", s.solver.step_mu},
        {"n_max", s.solver.n_max},
        {"inner_max", s.solver.inner_max},
        {"tol", s.solver.tol},
        {"eta", s.solver.eta},
        {"lambda_bar_factor", s.solver.lambda_bar_factor},
        {"warm_restart", s.warm_restart}}},
  };
}

std::string config_hash(const Scenario& s) {
  const std::string canonical = to_json(s).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return hex64(h);
}

json to_json(const SchemeResult& r, const std::string& hash) {
  json j;
  j["code_version"] = kCodeVersion;
  j["config_hash"] = hash;
  j["drop"] = r.drop;
  j["seed"] = r.seed;
  j["direction"] = r.direction;
  j["scheme"] = r.scheme;
  j["lambda"] = r.lambda ? json(*r.lambda) : json(nullptr);
  j["gamma"] = r.gamma ? json(*r.gamma) : json(nullptr);
  j["se"] = std::vector<double>(r.se.data(), r.se.data() + r.se.size());
  j["mean_se"] = r.se.size() > 0 ? r.se.mean() : 0.0;
  j["ee"] = r.ee;
  j["serving_aps"] = r.serving_aps;
  double mean_aps = 0.0;
  for (int n : r.serving_aps) mean_aps += n;
  j["mean_serving_aps"] = r.serving_aps.empty() ? 0.0 : mean_aps / static_cast<double>(r.serving_aps.size());
  j["active_aps"] = r.active_aps;
  j["power"] = to_json(r.power);
  j["sinr_flags"] = r.sinr_flags;
  j["fallback_ues"] = r.fallback_ues;
  j["feasible"] = r.feasible;
  if (r.solver) {
    const auto& sv = *r.solver;
    j["solver"] = {{"iterations", sv.iterations},           {"outer", sv.outer},
                   {"restarts", sv.restarts},               {"converged", sv.converged},
                   {"objective", sv.objective},             {"stage_lambdas", sv.stage_lambdas},
                   {"stage_iterations", sv.stage_iterations}};
  } else {
    j["solver"] = nullptr;
  }
  return j;
}

namespace {

struct DropContext {
  const Scenario& s;
  NetworkGeometry geom;
  VecR p_dense;
  Association dense;
  LsfMoments design;
  LsfMoments eval;
};

void finish_result(const DropContext& ctx, SchemeResult& r, const Association& assoc, const MatR& rho_kl,
                   const VecR& p, bool uplink) {
  const Scenario& s = ctx.s;
  PowerModelParams pm = s.power;
  pm.tau_c = s.tau_c;
  pm.tau_p = s.tau_p;
  pm.tau_u = uplink ? s.tau_c - s.tau_p : 0;
  pm.tau_d = uplink ? 0 : s.tau_c - s.tau_p;
  const VecR zeros = VecR::Zero(r.se.size());
  r.power = power_total(pm, s.network.N(), assoc, rho_kl, p, uplink ? r.se : zeros, uplink ? zeros : r.se);
  r.ee = energy_efficiency(r.se, zeros, r.power.total, pm.bandwidth_hz);
  r.serving_aps.clear();
  for (const auto& m : assoc.serving) r.serving_aps.push_back(static_cast<int>(m.size()));
  r.active_aps = assoc.active_aps();
}

SchemeResult uplink_result(const DropContext& ctx, const std::string& scheme, const std::vector<VecC>& a,
                           const Association& assoc, const VecR& p) {
  const Scenario& s = ctx.s;
  SchemeResult r;
  r.direction = "uplink";
  r.scheme = scheme;
  const LsfStatistics ev = lsf_statistics(ctx.eval, p, 1.0);
  r.se.resize(ev.K);
  for (int k = 0; k < ev.K; ++k) {
    const SinrValue v = uplink_sinr(a[static_cast<std::size_t>(k)], ev, k);
    r.sinr_flags += v.flagged;
    r.se[k] = uplink_se(v.value, s.tau_c - s.tau_p, s.tau_c);
  }
  finish_result(ctx, r, assoc, MatR::Zero(ev.K, ev.L), p, true);
  return r;
}

SchemeResult downlink_result(const DropContext& ctx, const std::string& scheme, const LsfpSolution& sol) {
  const Scenario& s = ctx.s;
  SchemeResult r;
  r.direction = "downlink";
  r.scheme = scheme;
  const auto sinr = downlink_sinr(sol.b, ctx.eval, 1.0);
  r.se.resize(static_cast<Eigen::Index>(sinr.size()));
  for (std::size_t k = 0; k < sinr.size(); ++k) {
    r.sinr_flags += sinr[k].flagged;
    r.se[static_cast<Eigen::Index>(k)] = downlink_se(sinr[k].value, s.tau_c - s.tau_p, s.tau_c);
  }
  r.feasible = per_ap_excess(sol, s.downlink.rho_max) <= 1e-9;
  finish_result(ctx, r, sol.assoc, sol.per_ap_power(), ctx.p_dense, false);
  return r;
}

bool wants(const std::vector<std::string>& list, const char* name) {
  return std::find(list.begin(), list.end(), name) != list.end();
}

}  // namespace

std::vector<SchemeResult> run_drop(const Scenario& s, int drop) {
  const std::uint64_t seed = derive_seed(s.seed, static_cast<std::uint64_t>(drop));
  Rng geo_rng(derive_seed(seed, 0));
  Rng cal_rng(derive_seed(seed, 1));
  Rng mc_rng(derive_seed(seed, 2));
  Rng eval_rng(derive_seed(seed, 3));

  DropContext ctx{s, drop_network(s.network, geo_rng), {}, {}, {}, {}};
  const int K = ctx.geom.K, L = ctx.geom.L;
  const ChannelStatistics stats = correlation_matrices(ctx.geom, s.network);
  const PilotAssignment assign = assign_pilots(ctx.geom, s.tau_p);
  const EstimationStatistics est = estimation_stats(stats, assign, s.pilot_power_w, 1.0);
  ctx.dense = Association::dense(K, L);
  ctx.p_dense = fractional_power_control(ctx.geom.beta, ctx.dense.serving, s.theta, s.p_max_w);

  MonteCarloEngine engine(stats, assign, est, s.combiner, ctx.p_dense);
  engine.calibrate(s.n_calibration, cal_rng);
  ctx.design = engine.moments(s.n_mc, mc_rng, s.min_mc);
  ctx.eval = engine.moments(s.n_mc_eval, eval_rng, s.min_mc);
  const LsfStatistics design = lsf_statistics(ctx.design, ctx.p_dense, 1.0);
  const Association dcc = heuristic_dcc(ctx.geom, assign);
  const LsfdSolution dense_sol = olsfd(design, ctx.p_dense);

  std::vector<SchemeResult> out;
  auto push = [&](SchemeResult r) {
    r.drop = drop;
    r.seed = seed;
    out.push_back(std::move(r));
  };

  if (wants(s.uplink_schemes, "O-LSFD")) push(uplink_result(ctx, "O-LSFD", dense_sol.a, ctx.dense, ctx.p_dense));
  if (wants(s.uplink_schemes, "P-LSFD")) {
    const VecR p_part = fractional_power_control(ctx.geom.beta, dcc.serving, s.theta, s.p_max_w);
    const LsfdSolution sol = plsfd(ctx.design, p_part, 1.0, dcc);
    push(uplink_result(ctx, "P-LSFD", sol.a, sol.assoc, p_part));
  }

  const bool sparse_ul = wants(s.uplink_schemes, "S-LSFD");
  const bool sparse_dl = wants(s.downlink_schemes, "S-LSFP") || wants(s.downlink_schemes, "SV-LSFP");
  struct SparseCell {
    double lambda, gamma;
    SparseSolution sol;
    ExtractedAssociation ext;
  };
  std::vector<SparseCell> cells;
  if (sparse_ul || sparse_dl) {
    const RealEmbedding emb = embed(design, ctx.p_dense);
    for (double g : s.gammas) {
      for (double l : s.lambdas) {
        SparseSolution sol;
        if (g == 0.0)
          sol = s.warm_restart ? warm_restart_ew(emb, l, s.solver) : solve_ew(emb, l, s.solver);
        else
          sol = s.warm_restart ? warm_restart_gw(emb, l, g, s.solver) : solve_gw(emb, l, g, s.solver);
        ExtractedAssociation ext = extract_association(sol.a, emb, dense_sol.a);
        cells.push_back({l, g, std::move(sol), std::move(ext)});
      }
    }
  }
  if (sparse_ul) {
    for (const auto& c : cells) {
      SchemeResult r = uplink_result(ctx, "S-LSFD", c.ext.a, c.ext.assoc, ctx.p_dense);
      r.lambda = c.lambda;
      r.gamma = c.gamma;
      r.fallback_ues = c.ext.fallback_ues;
      r.solver = c.sol;
      push(std::move(r));
    }
  }

  const auto& ds = s.downlink_schemes;
  if (wants(ds, "FPA")) push(downlink_result(ctx, "FPA", fpa_scheme(ctx.geom.beta, dcc, s.downlink)));
  if (wants(ds, "H-FPA")) push(downlink_result(ctx, "H-FPA", hfpa_scheme(ctx.geom.beta, dcc, s.downlink)));
  if (wants(ds, "V-LSFP")) push(downlink_result(ctx, "V-LSFP", vlsfp_scheme(design, ctx.geom.beta, s.downlink)));
  if (wants(ds, "P-LSFP"))
    push(downlink_result(ctx, "P-LSFP", plsfp_scheme(ctx.design, 1.0, ctx.geom.beta, dcc, s.downlink)));
  for (const char* name : {"S-LSFP", "SV-LSFP"}) {
    if (!wants(ds, name)) continue;
    for (const auto& c : cells) {
      const LsfpSolution sol = std::string(name) == "S-LSFP"
                                   ? slsfp_scheme(c.ext.a, c.ext.assoc, ctx.geom.beta, s.downlink)
                                   : svlsfp_scheme(design, c.ext.assoc, ctx.geom.beta, s.downlink);
      SchemeResult r = downlink_result(ctx, name, sol);
      r.lambda = c.lambda;
      r.gamma = c.gamma;
      r.fallback_ues = c.ext.fallback_ues;
      r.solver = c.sol;
      push(std::move(r));
    }
  }
  return out;
}

namespace {

void write_manifest(const std::filesystem::path& path, const Scenario& s, const std::string& hash, int completed,
                    const std::string& status, const std::string& error = {}, int failed_drop = -1) {
  json m;
  m["code_version"] = kCodeVersion;
  m["config_hash"] = hash;
  m["seed"] = s.seed;
  m["n_drops"] = s.n_drops;
  m["completed_drops"] = completed;
  m["status"] = status;
  m["scenario"] = to_json(s);
  if (!error.empty()) {
    m["error"] = error;
    m["failed_drop"] = failed_drop;
  }
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << m.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

/// Number of drops an earlier run completed, after trimming results.ndjson to them.
int resume_point(const std::filesystem::path& results, const std::filesystem::path& manifest, const std::string& hash) {
  if (!std::filesystem::exists(manifest)) return 0;
  json m;
  {
    std::ifstream in(manifest);
    try {
      in >> m;
    } catch (const json::parse_error&) {
      throw std::runtime_error(manifest.string() + " is unreadable; remove it or choose another output directory");
    }
  }
  if (m.value("config_hash", std::string()) != hash || m.value("code_version", std::string()) != kCodeVersion)
    throw std::runtime_error(manifest.string() +
                             " belongs to a different configuration; choose another output directory");
  const int completed = m.value("completed_drops", 0);
  std::vector<std::string> keep;
  if (std::filesystem::exists(results)) {
    std::ifstream in(results);
    std::string line;
    while (std::getline(in, line)) {
      json rec = json::parse(line, nullptr, false);
      if (rec.is_discarded() || !rec.contains("drop")) continue;
      if (rec["drop"].get<int>() < completed) keep.push_back(line);
    }
  }
  std::ofstream out(results, std::ios::trunc);
  for (const auto& l : keep) out << l << '\n';
  return completed;
}

}  // namespace

RunSummary run_scenario(const Scenario& s, const RunOptions& opts) {
  s.validate();
  std::filesystem::create_directories(opts.out_dir);
  RunSummary sum;
  sum.drops_total = s.n_drops;
  sum.results = opts.out_dir / "results.ndjson";
  sum.manifest = opts.out_dir / "manifest.json";
  const std::string hash = config_hash(s);
  const int start = resume_point(sum.results, sum.manifest, hash);
  sum.drops_skipped = start;
  write_manifest(sum.manifest, s, hash, start, start >= s.n_drops ? "complete" : "running");
  if (start >= s.n_drops) return sum;

  std::mutex mu;
  std::condition_variable cv;
  std::map<int, std::string> ready;
  int failed_drop = -1;
  std::exception_ptr failure;
  std::atomic<int> next{start};
  std::atomic<bool> stop{false};

  auto worker = [&]() {
    while (!stop) {
      const int d = next.fetch_add(1);
      if (d >= s.n_drops) return;
      try {
        std::string lines;
        for (const auto& r : run_drop(s, d)) lines += to_json(r, hash).dump() + '\n';
        std::lock_guard<std::mutex> lk(mu);
        ready.emplace(d, std::move(lines));
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (failed_drop < 0 || d < failed_drop) {
          failed_drop = d;
          failure = std::current_exception();
        }
        stop = true;
      }
      cv.notify_all();
    }
  };

  const int n_threads = std::max(1, std::min(opts.threads, s.n_drops - start));
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);

  std::ofstream out(sum.results, std::ios::app);
  int completed = start;
  for (int d = start; d < s.n_drops; ++d) {
    std::string lines;
    {
      std::unique_lock<std::mutex> lk(mu);
      cv.wait(lk, [&] { return ready.count(d) || failed_drop == d; });
      if (!ready.count(d)) break;
      lines = std::move(ready[d]);
      ready.erase(d);
    }
    out << lines;
    out.flush();
    completed = d + 1;
    write_manifest(sum.manifest, s, hash, completed, completed == s.n_drops ? "complete" : "running");
  }
  stop = true;
  for (auto& t : pool) t.join();
  sum.drops_run = completed - start;
  if (failure) {
    std::string what = "unknown error";
    try {
      std::rethrow_exception(failure);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    write_manifest(sum.manifest, s, hash, completed, "failed", what, failed_drop);
    std::rethrow_exception(failure);
  }
  return sum;
}

}  // namespace cfmimo
