// SPDX-License-Identifier: Apache-2.0
//
// Solver accuracy and timing study on synthetic LSF instances.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "cfmimo/sparse.hpp"

#include "json.hpp"

namespace cfmimo {

struct BenchConfig {
  int instances = 50;
  int K = 20;
  int L = 40;
  std::vector<double> lambdas{1e-4, 1e-2, 1e-1};
  std::vector<double> gammas{0.0, 1e-2};
  std::uint64_t seed = 7;
  SolverConfig solver;
  bool warm_restart = false;

  void validate() const;
};

BenchConfig bench_from_json(const nlohmann::json& j);
BenchConfig load_bench(const std::filesystem::path& path);

/// One solver run on one (instance, lambda, gamma) cell.
struct ConvergenceRecord {
  int instance = 0;
  std::string solver;  // "EW", "GW" or "oracle"
  double lambda = 0.0;
  double gamma = 0.0;
  double f_star = 0.0;
  double objective = 0.0;
  double final_gap = 0.0;  // (f - f*) / |f*|
  long iterations = 0;
  int outer = 0;
  bool converged = false;
  double wall_ms = 0.0;
  std::vector<double> gap_trace;  // (f - f*) / |f*| after each outer iteration
};

nlohmann::json to_json(const ConvergenceRecord& r);

/// (f - f*) / |f*|, with the absolute difference when f* is zero.
double relative_gap(double f, double f_star);

/// Solves every cell with the reference oracle first, then with EW (gamma = 0
/// only) and GW, and records the gap traces. `on_record` sees records as they
/// are produced.
std::vector<ConvergenceRecord> convergence_report(
    const BenchConfig& cfg, const std::function<void(const ConvergenceRecord&)>& on_record = {});

/// Writes convergence.ndjson, convergence.csv (final values) and traces.csv
/// into `dir`.
void write_convergence(const std::vector<ConvergenceRecord>& records, const std::filesystem::path& dir);

}  // namespace cfmimo
