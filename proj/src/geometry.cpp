// SPDX-License-Identifier: Apache-2.0

#include "cfmimo/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cfmimo {

double NetworkConfig::noise_power_dbw() const {
  // -174 dBm/Hz thermal floor
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db - 30.0;
}

void NetworkConfig::validate() const {
  if (num_aps < 1) throw std::invalid_argument("network.num_aps must be >= 1");
  if (antennas_per_ap < 1) throw std::invalid_argument("network.antennas_per_ap must be >= 1");
  if (num_ues < 1) throw std::invalid_argument("network.num_ues must be >= 1");
  if (!(area_side_m > 0.0)) throw std::invalid_argument("network.area_side_m must be > 0");
  if (!(asd_azimuth_deg > 0.0)) throw std::invalid_argument("network.asd_azimuth_deg must be > 0");
  if (!(asd_elevation_deg > 0.0)) throw std::invalid_argument("network.asd_elevation_deg must be > 0");
  if (!(min_distance_m > 0.0)) throw std::invalid_argument("network.min_distance_m must be > 0");
  if (shadowing_std_db < 0.0) throw std::invalid_argument("network.shadowing_std_db must be >= 0");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("network.bandwidth_hz must be > 0");
}

double pathloss_db(const NetworkConfig& cfg, double distance_m) {
  return cfg.pathloss_offset_db - cfg.pathloss_slope_db * std::log10(distance_m);
}

double wrapped_distance(const Point& ue, const Point& ap, double side, Point* displacement) {
  double best = std::numeric_limits<double>::infinity();
  Point best_d{0.0, 0.0};
  for (int ix = -1; ix <= 1; ++ix) {
    for (int iy = -1; iy <= 1; ++iy) {
      const double dx = ue[0] - (ap[0] + ix * side);
      const double dy = ue[1] - (ap[1] + iy * side);
      const double d = std::hypot(dx, dy);
      if (d < best) {
        best = d;
        best_d = {dx, dy};
      }
    }
  }
  if (displacement) *displacement = best_d;
  return best;
}

NetworkGeometry drop_network(const NetworkConfig& cfg) {
  Rng rng(cfg.rng_seed);
  return drop_network(cfg, rng);
}

NetworkGeometry drop_network(const NetworkConfig& cfg, Rng& rng) {
  cfg.validate();
  std::vector<Point> aps(static_cast<std::size_t>(cfg.L()));
  std::vector<Point> ues(static_cast<std::size_t>(cfg.K()));
  for (auto& p : aps) p = {rng.uniform(0.0, cfg.area_side_m), rng.uniform(0.0, cfg.area_side_m)};
  for (auto& p : ues) p = {rng.uniform(0.0, cfg.area_side_m), rng.uniform(0.0, cfg.area_side_m)};
  return place_network(cfg, std::move(aps), std::move(ues), rng);
}

NetworkGeometry place_network(const NetworkConfig& cfg, std::vector<Point> aps, std::vector<Point> ues,
                              Rng& rng) {
  cfg.validate();
  NetworkGeometry g;
  g.K = static_cast<int>(ues.size());
  g.L = static_cast<int>(aps.size());
  g.ap_positions = std::move(aps);
  g.ue_positions = std::move(ues);
  g.distance.resize(g.K, g.L);
  g.azimuth.resize(g.K, g.L);
  g.gain_db.resize(g.K, g.L);
  g.beta.resize(g.K, g.L);

  const double noise_dbw = cfg.noise_power_dbw();
  for (int k = 0; k < g.K; ++k) {
    for (int l = 0; l < g.L; ++l) {
      Point disp{};
      const double d = wrapped_distance(g.ue_positions[k], g.ap_positions[l], cfg.area_side_m, &disp);
      g.distance(k, l) = std::max(d, cfg.min_distance_m);
      g.azimuth(k, l) = std::atan2(disp[1], disp[0]);
      const double shadow = cfg.shadowing_std_db > 0.0 ? cfg.shadowing_std_db * rng.normal() : 0.0;
      g.gain_db(k, l) = pathloss_db(cfg, g.distance(k, l)) + shadow;
      g.beta(k, l) = std::pow(10.0, (g.gain_db(k, l) - noise_dbw) / 10.0);
    }
  }
  return g;
}

MatC local_scattering_ula(int n, double beta, double azimuth_rad, double asd_azimuth_rad, double elevation_rad,
                          double asd_elevation_rad) {
  MatC r(n, n);
  const double ce = std::cos(elevation_rad);
  const double se = std::sin(elevation_rad);
  const double sa = std::sin(azimuth_rad);
  const double ca = std::cos(azimuth_rad);
  for (int m = 0; m < n; ++m) {
    for (int c = 0; c < n; ++c) {
      const double dist = static_cast<double>(c - m);
      const double phase = kPi * dist * sa * ce;
      const double az = asd_azimuth_rad * kPi * dist * ca * ce;
      const double el = asd_elevation_rad * kPi * dist * sa * se;
      const double att = std::exp(-0.5 * az * az - 0.5 * el * el);
      r(m, c) = beta * att * std::polar(1.0, phase);
    }
  }
  return r;
}

ChannelStatistics correlation_matrices(const NetworkGeometry& geom, const NetworkConfig& cfg) {
  ChannelStatistics s;
  s.K = geom.K;
  s.L = geom.L;
  s.N = cfg.N();
  s.R.resize(static_cast<std::size_t>(s.K * s.L));
  const double asd_az = cfg.asd_azimuth_deg * kPi / 180.0;
  const double asd_el = cfg.use_elevation ? cfg.asd_elevation_deg * kPi / 180.0 : 0.0;
  for (int k = 0; k < s.K; ++k) {
    for (int l = 0; l < s.L; ++l) {
      const double beta = geom.beta(k, l);
      const double elev = cfg.use_elevation
                              ? std::atan2(cfg.ap_height_m - cfg.ue_height_m, geom.distance(k, l))
                              : 0.0;
      MatC r = local_scattering_ula(s.N, beta, geom.azimuth(k, l), asd_az, elev, asd_el);
      if (s.N > 1 && min_eigenvalue(r) < -1e-13 * beta) {
        Eigen::SelfAdjointEigenSolver<MatC> es(hermitian_part(r));
        VecR ev = es.eigenvalues().cwiseMax(0.0);
        r = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
        r *= (s.N * beta) / r.trace().real();
        ++s.psd_repairs;
      }
      s.at(k, l) = std::move(r);
    }
  }
  return s;
}

ChannelSampler::ChannelSampler(const ChannelStatistics& stats) : K_(stats.K), L_(stats.L), N_(stats.N) {
  sqrt_r_.reserve(stats.R.size());
  for (const auto& r : stats.R) sqrt_r_.push_back(hermitian_sqrt(r));
}

void ChannelSampler::draw_into(Rng& rng, ChannelRealization& out) const {
  out.K = K_;
  out.L = L_;
  out.N = N_;
  out.h.resize(sqrt_r_.size());
  VecC z(N_);
  for (std::size_t i = 0; i < sqrt_r_.size(); ++i) {
    for (int n = 0; n < N_; ++n) z[n] = rng.complex_normal();
    out.h[i].noalias() = sqrt_r_[i] * z;
  }
}

ChannelRealization ChannelSampler::draw(Rng& rng) const {
  ChannelRealization out;
  draw_into(rng, out);
  return out;
}

std::vector<ChannelRealization> realize_channels(const ChannelStatistics& stats, int n_blocks, Rng& rng) {
  ChannelSampler sampler(stats);
  std::vector<ChannelRealization> out(static_cast<std::size_t>(n_blocks));
  for (auto& block : out) sampler.draw_into(rng, block);
  return out;
}

nlohmann::json matrix_to_json(const MatC& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const NetworkConfig& cfg) {
  return {
      {"num_aps", cfg.num_aps},
      {"antennas_per_ap", cfg.antennas_per_ap},
      {"num_ues", cfg.num_ues},
      {"area_side_m", cfg.area_side_m},
      {"pathloss_offset_db", cfg.pathloss_offset_db},
      {"pathloss_slope_db", cfg.pathloss_slope_db},
      {"shadowing_std_db", cfg.shadowing_std_db},
      {"min_distance_m", cfg.min_distance_m},
      {"asd_azimuth_deg", cfg.asd_azimuth_deg},
      {"asd_elevation_deg", cfg.asd_elevation_deg},
      {"use_elevation", cfg.use_elevation},
      {"ap_height_m", cfg.ap_height_m},
      {"ue_height_m", cfg.ue_height_m},
      {"bandwidth_hz", cfg.bandwidth_hz},
      {"noise_figure_db", cfg.noise_figure_db},
      {"rng_seed", cfg.rng_seed},
  };
}

nlohmann::json to_json(const NetworkGeometry& geom, std::uint64_t seed) {
  nlohmann::json j;
  j["seed"] = seed;
  j["K"] = geom.K;
  j["L"] = geom.L;
  j["ap_positions"] = geom.ap_positions;
  j["ue_positions"] = geom.ue_positions;
  auto mat = [](const MatR& m) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index c = 0; c < m.cols(); ++c) rows[static_cast<std::size_t>(i)].push_back(m(i, c));
    return rows;
  };
  j["distance_m"] = mat(geom.distance);
  j["gain_db"] = mat(geom.gain_db);
  j["beta"] = mat(geom.beta);
  return j;
}

nlohmann::json to_json(const ChannelStatistics& stats, std::uint64_t seed) {
  nlohmann::json j;
  j["seed"] = seed;
  j["K"] = stats.K;
  j["L"] = stats.L;
  j["N"] = stats.N;
  j["psd_repairs"] = stats.psd_repairs;
  nlohmann::json r = nlohmann::json::array();
  for (const auto& m : stats.R) r.push_back(matrix_to_json(m));
  j["R"] = std::move(r);
  return j;
}

}  // namespace cfmimo
