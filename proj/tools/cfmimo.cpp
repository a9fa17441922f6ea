// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: run scenarios, summarize results, benchmark solvers.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cfmimo/convergence.hpp"
#include "cfmimo/scenario.hpp"
#include "cfmimo/summary.hpp"

namespace {

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string ap_sleep;
  std::string out;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--seed", f.seed, "Master seed (overrides the config)");
  app->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--ap-sleep", f.ap_sleep, "Power down APs that serve no UE")->check(CLI::IsMember({"on", "off"}));
  app->add_option("--out", f.out, "Output directory");
}

int run(const std::string& path, const CommonFlags& f) {
  cfmimo::Scenario s = cfmimo::load_scenario(path);
  if (f.seed) s.seed = *f.seed;
  if (!f.ap_sleep.empty()) s.power.ap_sleep = f.ap_sleep == "on";
  cfmimo::RunOptions opts;
  opts.out_dir = f.out.empty() ? std::filesystem::path("results") / s.name : std::filesystem::path(f.out);
  opts.threads = f.threads;
  const auto sum = cfmimo::run_scenario(s, opts);
  std::cout << "config " << cfmimo::config_hash(s) << ": " << sum.drops_run << " drops run, " << sum.drops_skipped
            << " resumed, results in " << sum.results.string() << '\n';
  return 0;
}

int summarize(const std::string& path, const CommonFlags& f) {
  const auto records = cfmimo::load_records(path);
  const auto rows = cfmimo::summarize_records(records);
  const std::filesystem::path dir = f.out.empty() ? std::filesystem::path(path).parent_path() : std::filesystem::path(f.out);
  cfmimo::write_summary(rows, dir);
  std::printf("%-9s %-8s %-8s %-6s %5s %9s %9s %12s %7s %7s\n", "direction", "scheme", "lambda", "gamma", "drops",
              "mean_SE", "SE_95%", "mean_EE", "|M_k|", "active");
  for (const auto& r : rows) {
    const std::string l = r.lambda ? CLI::detail::to_string(*r.lambda) : "-";
    const std::string g = r.gamma ? CLI::detail::to_string(*r.gamma) : "-";
    std::printf("%-9s %-8s %-8s %-6s %5d %9.4f %9.4f %12.4g %7.2f %7.2f\n", r.direction.c_str(), r.scheme.c_str(),
                l.c_str(), g.c_str(), r.drops, r.mean_se, r.se_95_likely, r.mean_ee, r.mean_serving_aps,
                r.mean_active_aps);
  }
  std::cout << "tables written to " << (dir.empty() ? std::filesystem::path(".") : dir).string() << '\n';
  return 0;
}

int converge(const std::string& path, const CommonFlags& f) {
  cfmimo::BenchConfig b = cfmimo::load_bench(path);
  if (f.seed) b.seed = *f.seed;
  const auto records = cfmimo::convergence_report(b, [](const cfmimo::ConvergenceRecord& r) {
    if (r.solver == "oracle") return;
    std::printf("instance %3d %-3s lambda=%-8g gamma=%-6g gap=%10.3e iterations=%7ld %9.1f ms\n", r.instance,
                r.solver.c_str(), r.lambda, r.gamma, r.final_gap, r.iterations, r.wall_ms);
    std::fflush(stdout);
  });
  const std::filesystem::path dir = f.out.empty() ? std::filesystem::path("results") / "converge" : std::filesystem::path(f.out);
  cfmimo::write_convergence(records, dir);
  std::cout << "tables written to " << dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-free massive MIMO simulator with sparse large-scale fading decoding and precoding"};
  app.require_subcommand(1);
  CommonFlags flags;
  std::string input;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write result records");
  run_cmd->add_option("scenario", input, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  add_common(run_cmd, flags);

  auto* sum_cmd = app.add_subcommand("summarize", "Aggregate result records into summary tables");
  sum_cmd->add_option("results", input, "results.ndjson file")->required()->check(CLI::ExistingFile);
  add_common(sum_cmd, flags);

  auto* conv_cmd = app.add_subcommand("converge", "Solver accuracy and timing study");
  conv_cmd->add_option("bench", input, "Benchmark JSON file")->required()->check(CLI::ExistingFile);
  add_common(conv_cmd, flags);

  CLI11_PARSE(app, argc, argv);
  try {
    if (run_cmd->parsed()) return run(input, flags);
    if (sum_cmd->parsed()) return summarize(input, flags);
    return converge(input, flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
