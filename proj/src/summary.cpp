// SPDX-License-Identifier: Apache-2.0

#include "cfmimo/summary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cfmimo {

using nlohmann::json;

double nearest_rank_percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (!(pct >= 0.0 && pct <= 100.0)) throw std::invalid_argument("percentile level must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  // Guard against pct * n / 100 landing just above an integer through rounding.
  const double exact = pct / 100.0 * n;
  auto rank = static_cast<std::size_t>(std::ceil(exact - 1e-9 * std::max(1.0, exact)));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

std::vector<double> cdf_points(std::vector<double> values, int n_points) {
  if (values.empty()) throw std::invalid_argument("CDF of an empty sample");
  if (n_points < 2) throw std::invalid_argument("CDF needs at least two points");
  std::sort(values.begin(), values.end());
  std::vector<double> out(static_cast<std::size_t>(n_points));
  for (int j = 0; j < n_points; ++j) {
    const double level = 100.0 * j / (n_points - 1);
    const auto n = static_cast<double>(values.size());
    const double exact = level / 100.0 * n;
    auto rank = static_cast<std::size_t>(std::ceil(exact - 1e-9 * std::max(1.0, exact)));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    out[static_cast<std::size_t>(j)] = values[rank - 1];
  }
  return out;
}

namespace {

std::optional<double> optional_number(const json& r, const char* key) {
  auto it = r.find(key);
  if (it == r.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw std::invalid_argument(std::string("record field '") + key + "' is not a number");
  return it->get<double>();
}

template <typename T>
T required(const json& r, const char* key) {
  auto it = r.find(key);
  if (it == r.end()) throw std::invalid_argument(std::string("record lacks field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("record field '") + key + "' has the wrong type");
  }
}

struct Group {
  SummaryRow row;
  std::vector<double> se;
  double ee_sum = 0.0;
  double aps_sum = 0.0;
  double active_sum = 0.0;
};

}  // namespace

std::vector<SummaryRow> summarize_records(const std::vector<json>& records, int n_cdf) {
  if (records.empty()) throw std::invalid_argument("no result records to summarize");
  std::vector<Group> groups;
  for (const auto& r : records) {
    if (!r.is_object()) throw std::invalid_argument("result record is not a JSON object");
    const auto direction = required<std::string>(r, "direction");
    const auto scheme = required<std::string>(r, "scheme");
    const auto lambda = optional_number(r, "lambda");
    const auto gamma = optional_number(r, "gamma");
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.row.direction == direction && g.row.scheme == scheme && g.row.lambda == lambda &&
             g.row.gamma == gamma;
    });
    if (it == groups.end()) {
      Group g;
      g.row.direction = direction;
      g.row.scheme = scheme;
      g.row.lambda = lambda;
      g.row.gamma = gamma;
      groups.push_back(std::move(g));
      it = std::prev(groups.end());
    }
    const auto se = required<std::vector<double>>(r, "se");
    if (se.empty()) throw std::invalid_argument("record has an empty SE vector");
    const auto aps = required<std::vector<int>>(r, "serving_aps");
    it->se.insert(it->se.end(), se.begin(), se.end());
    it->ee_sum += required<double>(r, "ee");
    it->aps_sum += aps.empty() ? 0.0 : std::accumulate(aps.begin(), aps.end(), 0.0) / static_cast<double>(aps.size());
    it->active_sum += required<double>(r, "active_aps");
    it->row.drops += 1;
  }

  std::vector<SummaryRow> rows;
  for (auto& g : groups) {
    SummaryRow row = g.row;
    const double d = row.drops;
    row.ue_samples = static_cast<int>(g.se.size());
    row.mean_se = std::accumulate(g.se.begin(), g.se.end(), 0.0) / static_cast<double>(g.se.size());
    row.se_95_likely = nearest_rank_percentile(g.se, 5.0);
    row.mean_ee = g.ee_sum / d;
    row.mean_serving_aps = g.aps_sum / d;
    row.mean_active_aps = g.active_sum / d;
    row.cdf = cdf_points(g.se, n_cdf);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<json> load_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

namespace {

std::string opt_str(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os << std::setprecision(17) << *v;
  return os.str();
}

}  // namespace

void write_summary(const std::vector<SummaryRow>& rows, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream s(dir / "summary.csv");
  if (!s) throw std::runtime_error("cannot write " + (dir / "summary.csv").string());
  s << std::setprecision(10);
  s << "direction,scheme,lambda,gamma,drops,ue_samples,mean_se,se_95_likely,mean_ee,mean_serving_aps,"
       "mean_active_aps\n";
  for (const auto& r : rows)
    s << r.direction << ',' << r.scheme << ',' << opt_str(r.lambda) << ',' << opt_str(r.gamma) << ',' << r.drops
      << ',' << r.ue_samples << ',' << r.mean_se << ',' << r.se_95_likely << ',' << r.mean_ee << ','
      << r.mean_serving_aps << ',' << r.mean_active_aps << '\n';

  std::ofstream c(dir / "cdf.csv");
  if (!c) throw std::runtime_error("cannot write " + (dir / "cdf.csv").string());
  c << std::setprecision(10);
  c << "direction,scheme,lambda,gamma,level,se\n";
  for (const auto& r : rows) {
    const auto n = r.cdf.size();
    for (std::size_t j = 0; j < n; ++j)
      c << r.direction << ',' << r.scheme << ',' << opt_str(r.lambda) << ',' << opt_str(r.gamma) << ','
        << static_cast<double>(j) / static_cast<double>(n - 1) << ',' << r.cdf[j] << '\n';
  }
}

}  // namespace cfmimo
