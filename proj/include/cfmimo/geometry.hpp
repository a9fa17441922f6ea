// SPDX-License-Identifier: Apache-2.0
//
// Network drops, large-scale fading, spatial correlation and small-scale
// channel realizations.
//
// All channel gains are stored normalized by the receiver noise power, so the
// noise variance is 1 in every downstream computation and transmit powers are
// plain watts.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cfmimo/linalg.hpp"
#include "cfmimo/rng.hpp"

#include "json.hpp"

namespace cfmimo {

struct NetworkConfig {
  int num_aps = 40;            // L
  int antennas_per_ap = 4;     // N
  int num_ues = 20;            // K
  double area_side_m = 500.0;

  // Pathloss: gain_dB = pathloss_offset_db - pathloss_slope_db * log10(d / 1 m) + shadowing
  double pathloss_offset_db = -30.5;
  double pathloss_slope_db = 36.7;
  double shadowing_std_db = 4.0;
  double min_distance_m = 10.0;

  double asd_azimuth_deg = 10.0;
  double asd_elevation_deg = 10.0;
  bool use_elevation = false;  // fold the elevation spread into the correlation model
  double ap_height_m = 10.0;   // only used when use_elevation is set
  double ue_height_m = 1.5;

  double bandwidth_hz = 20e6;
  double noise_figure_db = 7.0;

  std::uint64_t rng_seed = 1;

  int L() const { return num_aps; }
  int N() const { return antennas_per_ap; }
  int K() const { return num_ues; }

  /// Receiver noise power in dBW (thermal floor + noise figure).
  double noise_power_dbw() const;

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
};

using Point = std::array<double, 2>;

struct NetworkGeometry {
  int K = 0;
  int L = 0;
  std::vector<Point> ap_positions;
  std::vector<Point> ue_positions;
  MatR distance;  // K x L, wrap-around, floored
  MatR azimuth;   // K x L, angle of the UE seen from the AP (nearest image)
  MatR gain_db;   // K x L, pathloss + shadowing
  MatR beta;      // K x L, linear gain over noise
};

/// Pathloss (no shadowing) at distance d, in dB.
double pathloss_db(const NetworkConfig& cfg, double distance_m);

/// Minimum distance between `ue` and the nine translates of `ap` on the torus
/// of side `side`. Optionally returns the displacement vector to the nearest image.
double wrapped_distance(const Point& ue, const Point& ap, double side, Point* displacement = nullptr);

/// Drops APs and UEs uniformly on the square and draws shadowing, using cfg.rng_seed.
NetworkGeometry drop_network(const NetworkConfig& cfg);
NetworkGeometry drop_network(const NetworkConfig& cfg, Rng& rng);

/// Builds a geometry from explicit positions; shadowing is drawn from `rng`.
NetworkGeometry place_network(const NetworkConfig& cfg, std::vector<Point> aps, std::vector<Point> ues,
                              Rng& rng);

struct ChannelStatistics {
  int K = 0;
  int L = 0;
  int N = 0;
  std::vector<MatC> R;  // index k * L + l
  int psd_repairs = 0;  // correlation matrices whose negative eigenvalues were clipped

  const MatC& at(int k, int l) const { return R[static_cast<std::size_t>(k * L + l)]; }
  MatC& at(int k, int l) { return R[static_cast<std::size_t>(k * L + l)]; }
};

/// Gaussian local scattering correlation of a half-wavelength ULA:
/// [R]_{m,n} = beta * exp(j*pi*(n-m)*sin(phi)) * exp(-(asd*pi*(n-m)*cos(phi))^2 / 2).
/// With `elevation_rad`/`asd_elevation_rad` nonzero the phase is scaled by
/// cos(elevation) and an extra Gaussian attenuation for the elevation spread is applied.
MatC local_scattering_ula(int n, double beta, double azimuth_rad, double asd_azimuth_rad,
                          double elevation_rad = 0.0, double asd_elevation_rad = 0.0);

ChannelStatistics correlation_matrices(const NetworkGeometry& geom, const NetworkConfig& cfg);

struct ChannelRealization {
  int K = 0;
  int L = 0;
  int N = 0;
  std::vector<VecC> h;  // index k * L + l

  const VecC& at(int k, int l) const { return h[static_cast<std::size_t>(k * L + l)]; }
};

/// Draws h_kl = R_kl^{1/2} z block after block; the square roots are computed once.
class ChannelSampler {
 public:
  explicit ChannelSampler(const ChannelStatistics& stats);
  ChannelRealization draw(Rng& rng) const;
  void draw_into(Rng& rng, ChannelRealization& out) const;

 private:
  int K_, L_, N_;
  std::vector<MatC> sqrt_r_;
};

std::vector<ChannelRealization> realize_channels(const ChannelStatistics& stats, int n_blocks, Rng& rng);

nlohmann::json to_json(const NetworkConfig& cfg);
nlohmann::json to_json(const NetworkGeometry& geom, std::uint64_t seed);
nlohmann::json to_json(const ChannelStatistics& stats, std::uint64_t seed);
nlohmann::json matrix_to_json(const MatC& m);

}  // namespace cfmimo
