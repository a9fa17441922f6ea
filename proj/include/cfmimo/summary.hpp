// SPDX-License-Identifier: Apache-2.0
//
// Aggregation of per-drop result records into summary and CDF tables.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace cfmimo {

/// Nearest-rank percentile: the smallest value with at least pct% of the
/// samples at or below it. Throws on empty input or pct outside [0, 100].
double nearest_rank_percentile(std::vector<double> values, double pct);

/// Empirical quantiles at levels j / (n_points - 1), j = 0..n_points-1.
std::vector<double> cdf_points(std::vector<double> values, int n_points = 200);

struct SummaryRow {
  std::string direction;
  std::string scheme;
  std::optional<double> lambda;
  std::optional<double> gamma;
  int drops = 0;
  int ue_samples = 0;
  double mean_se = 0.0;
  double se_95_likely = 0.0;  // 5th percentile of pooled per-UE SE
  double mean_ee = 0.0;
  double mean_serving_aps = 0.0;
  double mean_active_aps = 0.0;
  std::vector<double> cdf;  // per-UE SE quantiles
};

/// Groups records by (direction, scheme, lambda, gamma) in first-seen order.
/// Throws std::invalid_argument on empty input or malformed records.
std::vector<SummaryRow> summarize_records(const std::vector<nlohmann::json>& records, int cdf_points = 200);

/// Reads newline-delimited JSON records; blank lines are skipped.
std::vector<nlohmann::json> load_records(const std::filesystem::path& path);

/// Writes summary.csv and cdf.csv into `dir`.
void write_summary(const std::vector<SummaryRow>& rows, const std::filesystem::path& dir);

}  // namespace cfmimo
