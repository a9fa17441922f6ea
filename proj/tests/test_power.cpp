// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "cfmimo/power.hpp"
#include "cfmimo/power_control.hpp"
#include "doctest.h"

using namespace cfmimo;

namespace {

PowerModelParams uplink_params() {
  PowerModelParams p;
  p.tau_u = 190;
  p.tau_d = 0;
  return p;
}

PowerBreakdown evaluate(const PowerModelParams& params, int N, const Association& a, double p = 0.1,
                        double se = 1.0) {
  const int K = a.K();
  return power_total(params, N, a, MatR::Zero(K, a.L()), VecR::Constant(K, p), VecR::Constant(K, se),
                     VecR::Zero(K));
}

}  // namespace

TEST_CASE("an empty sleeping network draws only the CPU fixed power") {
  const auto params = uplink_params();
  const auto pb = power_total(params, 4, Association::from_serving(5, {}), MatR::Zero(0, 5), VecR(0), VecR(0), VecR(0));
  CHECK(pb.total == params.cpu_fixed_w);
}

TEST_CASE("single-link network matches a hand computation") {
  const auto pb = evaluate(uplink_params(), 1, Association::dense(1, 1));
  // UE: 0.1 + (10 * 0.1 + 190 * 0.1) / (200 * 0.4)
  CHECK(pb.ue[0] == doctest::Approx(0.35).epsilon(1e-14));
  // AP: 1 * 0.2 + 1 * 1 * 0.8
  CHECK(pb.ap[0] == doctest::Approx(1.0).epsilon(1e-14));
  // fronthaul: 0.825 + 190 / 200 * 1 * 0.01
  CHECK(pb.fronthaul[0] == doctest::Approx(0.8345).epsilon(1e-14));
  // CPU: 5 + 0.02 Gbit/s * 1 * 0.8
  CHECK(pb.cpu == doctest::Approx(5.016).epsilon(1e-14));
  CHECK(pb.total == doctest::Approx(0.35 + 1.0 + 0.8345 + 5.016).epsilon(1e-14));
}

TEST_CASE("downlink transmit power enters through the amplifier efficiency") {
  PowerModelParams params;
  params.tau_u = 0;
  params.tau_d = 190;
  MatR rho(1, 1);
  rho << 0.2;
  const auto pb = power_total(params, 2, Association::dense(1, 1), rho, VecR::Constant(1, 0.1), VecR::Zero(1),
                              VecR::Constant(1, 2.0));
  CHECK(pb.ap[0] == doctest::Approx(2 * 0.2 + 2 * 0.8 + 190.0 / (200.0 * 0.4) * 0.2).epsilon(1e-14));
  CHECK(pb.ue[0] == doctest::Approx(0.1 + 10 * 0.1 / (200 * 0.4)).epsilon(1e-14));
  CHECK(pb.cpu == doctest::Approx(5.0 + 0.02 * 2.0 * 0.1).epsilon(1e-14));
}

TEST_CASE("each extra served UE adds processing and signaling power") {
  const auto params = uplink_params();
  const int N = 4;
  const auto one = evaluate(params, N, Association::from_serving(2, {{0}, {1}, {1}}));
  const auto two = evaluate(params, N, Association::from_serving(2, {{0}, {0, 1}, {1}}));
  const double added = (two.ap[0] + two.fronthaul[0]) - (one.ap[0] + one.fronthaul[0]);
  CHECK(added == doctest::Approx(N * params.processing_w + 190.0 / 200.0 * params.signaling_w).epsilon(1e-12));
  CHECK(two.ap[1] == one.ap[1]);
}

TEST_CASE("shrinking an AP's served set never raises its power") {
  const auto params = uplink_params();
  const auto big = evaluate(params, 2, Association::from_serving(3, {{0, 1}, {0, 2}, {0}}));
  const auto small = evaluate(params, 2, Association::from_serving(3, {{1}, {0, 2}, {2}}));
  CHECK(small.ap[0] < big.ap[0]);
  CHECK(small.fronthaul[0] < big.fronthaul[0]);
}

TEST_CASE("sleep switch controls idle AP consumption") {
  auto params = uplink_params();
  const auto assoc = Association::from_serving(3, {{0}});
  const auto sleeping = evaluate(params, 4, assoc);
  CHECK(sleeping.ap[1] == 0.0);
  CHECK(sleeping.fronthaul[2] == 0.0);
  params.ap_sleep = false;
  const auto awake = evaluate(params, 4, assoc);
  CHECK(awake.ap[1] == doctest::Approx(4 * params.ap_circuit_w));
  CHECK(awake.fronthaul[2] == doctest::Approx(params.fronthaul_fixed_w));
  CHECK(awake.total > sleeping.total);
}

TEST_CASE("breakdown is exactly additive and nonnegative") {
  const auto pb = evaluate(uplink_params(), 4, Association::from_serving(4, {{0, 1}, {1, 2}, {3}}), 0.05, 2.3);
  CHECK(pb.total == doctest::Approx(pb.ue.sum() + pb.ap.sum() + pb.fronthaul.sum() + pb.cpu).epsilon(1e-12));
  CHECK((pb.ue.array() >= 0.0).all());
  CHECK((pb.ap.array() >= 0.0).all());
  CHECK((pb.fronthaul.array() >= 0.0).all());
  const auto j = to_json(pb);
  CHECK(j["total_w"].get<double>() == pb.total);
}

TEST_CASE("energy efficiency examples") {
  CHECK(energy_efficiency(VecR::Constant(1, 1.0), VecR::Zero(1), 10.0, 20e6) == doctest::Approx(2e6));
  CHECK(energy_efficiency(VecR::Zero(3), VecR::Zero(3), 10.0, 20e6) == 0.0);
  const VecR se = VecR::LinSpaced(4, 0.5, 3.0);
  const double base = energy_efficiency(se, VecR::Zero(4), 12.0, 20e6);
  CHECK(energy_efficiency(se, VecR::Zero(4), 12.0, 40e6) == doctest::Approx(2.0 * base));
  CHECK(energy_efficiency(se, VecR::Zero(4), 11.0, 20e6) > base);
  CHECK_THROWS_AS(energy_efficiency(se, se, 0.0, 20e6), std::invalid_argument);
}

TEST_CASE("power model validation") {
  PowerModelParams p;
  CHECK_NOTHROW(p.validate());
  p.eta_ap = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = PowerModelParams{};
  p.tau_u = 100;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = PowerModelParams{};
  p.signaling_w = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("fractional power control") {
  MatR beta(3, 2);
  beta << 1.0, 3.0, 8.0, 8.0, 2.0, 0.0;
  const std::vector<std::vector<int>> all{{0, 1}, {0, 1}, {0, 1}};
  const VecR eq = fractional_power_control(beta, all, 0.0, 0.1);
  CHECK((eq.array() == 0.1).all());

  const VecR one = fractional_power_control(beta.topRows(1), {{0, 1}}, 1.0, 0.1);
  CHECK(one[0] == 0.1);

  MatR b2(2, 1);
  b2 << 4.0, 1.0;
  const VecR ratio = fractional_power_control(b2, {{0}, {0}}, 1.0, 0.2);
  CHECK(ratio[1] == doctest::Approx(0.2));
  CHECK(ratio[0] == doctest::Approx(0.05));

  const VecR half = fractional_power_control(beta, all, 0.5, 0.1);
  CHECK(half.maxCoeff() == doctest::Approx(0.1));
  CHECK((half.array() > 0.0).all());
  CHECK(half[1] < half[0]);

  CHECK_THROWS_AS(fractional_power_control(beta, {{0}, {}, {1}}, 0.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(fractional_power_control(beta, all, 1.5, 0.1), std::invalid_argument);
}
