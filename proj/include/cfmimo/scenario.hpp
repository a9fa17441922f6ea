// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration and the per-drop pipeline: geometry, estimation,
// Monte Carlo statistics, every uplink and downlink scheme, power and EE.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cfmimo/downlink.hpp"
#include "cfmimo/geometry.hpp"
#include "cfmimo/power.hpp"
#include "cfmimo/sparse.hpp"
#include "cfmimo/uplink.hpp"

#include "json.hpp"

namespace cfmimo {

inline constexpr const char* kCodeVersion = "cfmimo-1.0.0";

struct Scenario {
  std::string name = "scenario";
  NetworkConfig network;
  int tau_c = 200;
  int tau_p = 10;
  CombinerKind combiner = CombinerKind::LMmse;
  std::vector<std::string> uplink_schemes{"O-LSFD", "P-LSFD", "S-LSFD"};
  std::vector<std::string> downlink_schemes{"FPA", "H-FPA", "V-LSFP", "P-LSFP", "S-LSFP", "SV-LSFP"};
  std::vector<double> lambdas{1e-4, 1e-2, 1e-1};
  std::vector<double> gammas{0.0, 1e-2};
  int n_drops = 20;
  int n_calibration = 2000;  // blocks for the combiner normalization
  int n_mc = 2000;           // blocks for design statistics
  int n_mc_eval = 10000;     // blocks for SE evaluation
  int min_mc = kDefaultMinBlocks;
  double pilot_power_w = 0.1;
  double p_max_w = 0.1;
  double theta = 0.5;
  DownlinkPowerParams downlink;
  PowerModelParams power;
  SolverConfig solver;
  bool warm_restart = true;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
};

/// Parses a scenario; unknown keys and type errors are reported with their
/// field path (for example "network.num_aps: expected an integer").
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json to_json(const Scenario& s);

/// FNV-1a 64-bit hash of the canonical JSON form, as 16 hex digits.
std::string config_hash(const Scenario& s);

/// One evaluated (drop, scheme, lambda, gamma) cell.
struct SchemeResult {
  int drop = 0;
  std::uint64_t seed = 0;
  std::string direction;  // "uplink" or "downlink"
  std::string scheme;
  std::optional<double> lambda;
  std::optional<double> gamma;
  VecR se;
  std::vector<int> serving_aps;
  int active_aps = 0;
  double ee = 0.0;
  PowerBreakdown power;
  int sinr_flags = 0;
  std::vector<int> fallback_ues;
  bool feasible = true;
  std::optional<SparseSolution> solver;
};

nlohmann::json to_json(const SchemeResult& r, const std::string& hash);

/// Runs the full pipeline of one drop. Results are ordered deterministically.
std::vector<SchemeResult> run_drop(const Scenario& s, int drop);

struct RunOptions {
  std::filesystem::path out_dir = "results";
  int threads = 1;
};

struct RunSummary {
  int drops_total = 0;
  int drops_skipped = 0;  // already present from an earlier run
  int drops_run = 0;
  std::filesystem::path results;
  std::filesystem::path manifest;
};

/// Runs every drop and appends records to <out>/results.ndjson, keeping
/// <out>/manifest.json current. Completed drops of an earlier run with the
/// same config hash are kept and skipped. On failure the manifest records the
/// error and the exception is rethrown.
RunSummary run_scenario(const Scenario& s, const RunOptions& opts);

}  // namespace cfmimo
