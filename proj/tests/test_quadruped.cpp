// Copyright 2026 The aclfmpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aclfmpc/mechanics/plant_truth.hpp"
#include "aclfmpc/quadruped/quadruped_model.hpp"
#include "test_helpers.hpp"

using namespace aclfmpc;
using namespace aclfmpc::testing;

namespace {

ContactMode standingMode() {
  ContactMode mode;
  mode.inContact = {true, true, true, true};
  mode.footPositionWorld = {Eigen::Vector3d(0.3, 0.2, 0.0),
                            Eigen::Vector3d(0.3, -0.2, 0.0),
                            Eigen::Vector3d(-0.3, 0.2, 0.0),
                            Eigen::Vector3d(-0.3, -0.2, 0.0)};
  return mode;
}

Eigen::VectorXd standingState() {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(12);
  x(2) = 0.5;
  return x;
}

SlidingSurfaceState restSliding() {
  SlidingSurfaceState s;
  s.sigma = Eigen::VectorXd::Zero(6);
  s.vr = Eigen::VectorXd::Zero(6);
  s.vrDot = Eigen::VectorXd::Zero(6);
  return s;
}

Eigen::VectorXd randomQuadState(Rng& rng) {
  Eigen::VectorXd x(12);
  x.head<3>() = rng.vector3(-0.3, 0.3) + Eigen::Vector3d(0, 0, 0.5);
  x(3) = rng.uniform(-0.5, 0.5);
  x(4) = rng.uniform(-0.5, 0.5);
  x(5) = rng.uniform(-1.0, 1.0);
  x.tail<6>() = rng.vector(6, -1.0, 1.0);
  return x;
}

}  // namespace

TEST_CASE("static equilibrium under equal loading with no estimate") {
  SrbParams params;
  const ContactMode mode = standingMode();
  Eigen::VectorXd u(12);
  for (int i = 0; i < 4; ++i) {
    u.segment<3>(3 * i) = Eigen::Vector3d(0, 0, params.mass * kGravity / 4.0);
  }
  const Eigen::VectorXd xdot =
      adaptiveSrbFlow(standingState(), u, Eigen::VectorXd::Zero(16), params,
                      mode, Eigen::VectorXd::Zero(6), Eigen::VectorXd::Zero(6));
  CHECK(xdot.norm() < 1e-12);
}

TEST_CASE("a pure downward force parameter lifts the predicted acceleration") {
  SrbParams params;
  const ContactMode mode = standingMode();
  const double f = 37.0;
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(16);
  pi(12) = -f;  // world-frame force parameter (0, 0, -f)
  const Eigen::VectorXd base =
      adaptiveSrbFlow(standingState(), Eigen::VectorXd::Zero(12),
                      Eigen::VectorXd::Zero(16), params, mode,
                      Eigen::VectorXd::Zero(6), Eigen::VectorXd::Zero(6));
  const Eigen::VectorXd shifted =
      adaptiveSrbFlow(standingState(), Eigen::VectorXd::Zero(12), pi, params,
                      mode, Eigen::VectorXd::Zero(6), Eigen::VectorXd::Zero(6));
  CHECK((shifted - base).segment<3>(6).isApprox(
      Eigen::Vector3d(0, 0, f / params.mass), 1e-12));
}

TEST_CASE("adaptive flow equals nominal flow minus the mapped estimate force") {
  SrbParams params;
  const ContactMode mode = standingMode();
  auto model = makeSrbModel(params, mode);
  Rng rng(43);
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd x = randomQuadState(rng);
    const Eigen::VectorXd u = rng.vector(12, -100.0, 100.0);
    const Eigen::VectorXd pi = rng.vector(16, -3.0, 3.0);
    const Eigen::VectorXd vr = rng.vector(6, -1.0, 1.0);
    const Eigen::VectorXd vrDot = rng.vector(6, -2.0, 2.0);

    const Eigen::VectorXd adaptive =
        adaptiveSrbFlow(x, u, pi, params, mode, vr, vrDot);
    const Eigen::VectorXd nominal =
        adaptiveSrbFlow(x, u, Eigen::VectorXd::Zero(16), params, mode, vr, vrDot);

    GeneralizedState gs{x.head<6>(), x.tail<6>()};
    const DynamicsTerms terms = model->dynamicsTerms(gs);
    const Eigen::VectorXd gen = model->regressorReference(gs, vr, vrDot) * pi;
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(12);
    delta.tail<6>() = -terms.M.ldlt().solve(gen);
    CHECK((adaptive - (nominal + delta)).lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("nominal recovery is exact when the estimate is zero") {
  SrbParams params;
  const ContactMode mode = standingMode();
  Rng rng(47);
  const Eigen::VectorXd x = randomQuadState(rng);
  const Eigen::VectorXd u = rng.vector(12, -100.0, 100.0);
  const Eigen::VectorXd viaZero =
      adaptiveSrbFlow(x, u, Eigen::VectorXd::Zero(16), params, mode,
                      rng.vector(6, -1, 1), rng.vector(6, -1, 1));
  const Eigen::VectorXd viaEmpty = adaptiveSrbFlow(
      x, u, Eigen::VectorXd(), params, mode, Eigen::VectorXd(), Eigen::VectorXd());
  CHECK((viaZero - viaEmpty).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("adaptive wrench frame conventions") {
  // World-frame force parameter at identity orientation appears verbatim
  // in the base-frame force block.
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(16);
  pi.segment<3>(10) = Eigen::Vector3d(10.0, 0.0, 0.0);
  const Eigen::VectorXd w = adaptiveWrench(standingState(), restSliding(), pi);
  CHECK((w.head<3>() - Eigen::Vector3d(10.0, 0.0, 0.0)).norm() < 1e-14);
  CHECK(w.tail<3>().norm() == doctest::Approx(0.0));

  // Pure payload mass at rest: force magnitude is its weight.
  Rng rng(53);
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd x = standingState();
    x.segment<3>(3) = rng.vector3(-0.6, 0.6);
    Eigen::VectorXd piMass = Eigen::VectorXd::Zero(16);
    piMass(0) = rng.uniform(1.0, 15.0);
    const Eigen::VectorXd wm = adaptiveWrench(x, restSliding(), piMass);
    CHECK(wm.head<3>().norm() == doctest::Approx(piMass(0) * kGravity));
    CHECK(wm.tail<3>().norm() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("static payload torque equals the cross-product oracle") {
  Rng rng(59);
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXd x = standingState();
    x.segment<3>(3) = rng.vector3(-0.6, 0.6);
    const double mass = rng.uniform(0.5, 12.0);
    const Eigen::Vector3d c = rng.vector3(-0.4, 0.4);
    Eigen::VectorXd pi = Eigen::VectorXd::Zero(16);
    pi(0) = mass;
    pi.segment<3>(1) = mass * c;

    const Eigen::VectorXd w = adaptiveWrench(x, restSliding(), pi);
    const Eigen::Matrix3d r = rotationZyx(x.segment<3>(3));
    const Eigen::Vector3d expected =
        (mass * c).cross(r.transpose() * Eigen::Vector3d(0, 0, kGravity));
    CHECK((w.tail<3>() - expected).norm() < 1e-10);
  }
}

TEST_CASE("adaptive wrench is jointly linear in the parameters") {
  Rng rng(61);
  const Eigen::VectorXd x = randomQuadState(rng);
  SlidingSurfaceState s;
  s.sigma = Eigen::VectorXd::Zero(6);
  s.vr = rng.vector(6, -1.0, 1.0);
  s.vrDot = rng.vector(6, -2.0, 2.0);
  const Eigen::VectorXd p1 = rng.vector(16, -2.0, 2.0);
  const Eigen::VectorXd p2 = rng.vector(16, -2.0, 2.0);
  const double a = 1.7, b = -0.4;
  const Eigen::VectorXd lhs = adaptiveWrench(x, s, a * p1 + b * p2);
  const Eigen::VectorXd rhs =
      a * adaptiveWrench(x, s, p1) + b * adaptiveWrench(x, s, p2);
  CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("friction cone margins") {
  FrictionConeConfig cone;
  cone.mu = 0.7;
  cone.epsilon = 0.5;
  const ContactMode mode = standingMode();
  const Eigen::VectorXd x = standingState();

  Eigen::VectorXd u = Eigen::VectorXd::Zero(12);
  for (int i = 0; i < 4; ++i) u.segment<3>(3 * i) = Eigen::Vector3d(0, 0, 100.0);
  const Eigen::VectorXd h = frictionConeConstraints(x, u, mode, cone);
  REQUIRE(h.size() == 8);
  for (int i = 0; i < 4; ++i) {
    CHECK(h(2 * i) == doctest::Approx(70.0));       // cone margin
    CHECK(h(2 * i + 1) == doctest::Approx(100.0));  // unilateral margin
  }

  // Boundary: tangential force at mu times normal.
  u.segment<3>(0) = Eigen::Vector3d(70.0, 0.0, 100.0);
  const Eigen::VectorXd hb = frictionConeConstraints(x, u, mode, cone);
  CHECK(std::abs(hb(0)) < cone.epsilon);

  // Random forces stay within epsilon of the exact cone margin.
  Rng rng(67);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd ur(12);
    for (int i = 0; i < 4; ++i) {
      ur.segment<3>(3 * i) =
          Eigen::Vector3d(rng.uniform(-80, 80), rng.uniform(-80, 80),
                          rng.uniform(0.0, 150.0));
    }
    const Eigen::VectorXd hr = frictionConeConstraints(x, ur, mode, cone);
    for (int i = 0; i < 4; ++i) {
      const Eigen::Vector3d lw = ur.segment<3>(3 * i);  // identity rotation
      const double exact =
          cone.mu * lw.z() - std::hypot(lw.x(), lw.y());
      CHECK(std::abs(hr(2 * i) - exact) <= cone.epsilon + 1e-12);
    }
  }

  // Swing feet are excluded.
  ContactMode threeFeet = standingMode();
  threeFeet.inContact[1] = false;
  CHECK(frictionConeConstraints(x, u, threeFeet, cone).size() == 6);
  CHECK(swingForceEquality(u, threeFeet).size() == 3);
  CHECK((swingForceEquality(u, threeFeet) - u.segment<3>(3)).norm() == 0.0);
}

TEST_CASE("weight distribution over stance feet") {
  const ContactMode mode = standingMode();
  PoseReferenceSample ref;
  ref.position = Eigen::Vector3d(0, 0, 0.5);

  const Eigen::VectorXd u4 =
      weightDistributionReference(ref, mode, 50.0, Eigen::VectorXd::Zero(16));
  for (int i = 0; i < 4; ++i) {
    CHECK((u4.segment<3>(3 * i) -
           Eigen::Vector3d(0, 0, 50.0 * kGravity / 4.0)).norm() < 1e-12);
    CHECK(u4(3 * i + 2) == doctest::Approx(122.625));
  }

  ContactMode threeFeet = mode;
  threeFeet.inContact[2] = false;
  const Eigen::VectorXd u3 = weightDistributionReference(
      ref, threeFeet, 50.0, Eigen::VectorXd::Zero(16));
  CHECK(u3.segment<3>(6).norm() == doctest::Approx(0.0));
  CHECK(u3(2) == doctest::Approx(50.0 * kGravity / 3.0));

  // A 10 kg payload estimate raises each foot share by a quarter of its
  // weight.
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(16);
  pi(0) = 10.0;
  const Eigen::VectorXd uPay = weightDistributionReference(ref, mode, 50.0, pi);
  CHECK(uPay(2) - u4(2) == doctest::Approx(10.0 * kGravity / 4.0));

  ContactMode none = mode;
  none.inContact = {false, false, false, false};
  CHECK_THROWS_AS(weightDistributionReference(ref, none, 50.0, pi),
                  std::invalid_argument);
}

TEST_CASE("true plant flow is representable by the adaptive flow") {
  // For a rigid payload plus constant world force there are parameters
  // that reproduce the true flow exactly, once the regressor is evaluated
  // at the true acceleration.
  SrbParams params;
  const ContactMode mode = standingMode();
  PlantTruth plant;
  plant.nominal = makeSrbModel(params, mode);
  plant.payload.pi = rigidPayloadParameters(
      14.0, {0.22, -0.05, 0.12}, 0.4 * Eigen::Matrix3d::Identity());
  plant.externalWrench.resize(6);
  plant.externalWrench << 25.0, -10.0, 5.0, 0.0, 0.0, 0.0;

  Rng rng(71);
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd x = randomQuadState(rng);
    const Eigen::VectorXd u = rng.vector(12, -120.0, 120.0);
    GeneralizedState gs{x.head<6>(), x.tail<6>()};

    const Eigen::VectorXd vdotTrue = trueForwardDynamics(plant, gs, u);
    const Eigen::VectorXd flowAdaptive = adaptiveSrbFlow(
        x, u, plant.trueParameters(), params, mode, gs.v, vdotTrue);
    Eigen::VectorXd flowTrue(12);
    flowTrue.head<3>() = gs.v.head<3>();
    flowTrue.segment<3>(3) = eulerRateMap(x.segment<3>(3)) * gs.v.tail<3>();
    flowTrue.tail<6>() = vdotTrue;
    CHECK((flowAdaptive - flowTrue).lpNorm<Eigen::Infinity>() < 1e-8);
  }
}

TEST_CASE("schedule lookup, wrapping and gap detection") {
  ContactMode a = standingMode();
  a.duration = 0.4;
  ContactMode b = standingMode();
  b.duration = 0.6;
  b.inContact[0] = false;

  ContactSchedule periodic({a, b}, true);
  CHECK(periodic.modeAt(0.1).stanceCount() == 4);
  CHECK(periodic.modeAt(0.5).stanceCount() == 3);
  CHECK(periodic.modeAt(1.1).stanceCount() == 4);   // wrapped
  CHECK(periodic.modeAt(-0.3).stanceCount() == 3);  // wraps backward

  ContactSchedule finite({a, b}, false);
  CHECK(finite.modeAt(0.99).stanceCount() == 3);
  CHECK_THROWS_AS(finite.modeAt(1.01), ScheduleGapError);
  CHECK_THROWS_AS(ContactSchedule({}, false), std::invalid_argument);

  ContactMode zero = standingMode();
  zero.duration = 0.0;
  CHECK_THROWS_AS(ContactSchedule({zero}, false), std::invalid_argument);
}

TEST_CASE("quadruped state packing round trip") {
  Rng rng(73);
  const Eigen::VectorXd x = randomQuadState(rng);
  const QuadrupedState s = QuadrupedState::unpack(x);
  CHECK((s.pack() - x).norm() == 0.0);
  const GeneralizedState gs = s.toGeneralized();
  CHECK((gs.q.head<3>() - s.p).norm() == 0.0);
  CHECK((gs.v.tail<3>() - s.omega).norm() == 0.0);

  const AdaptiveWrenchParams params =
      AdaptiveWrenchParams::fromFlat(rng.vector(16, -2.0, 2.0));
  CHECK((AdaptiveWrenchParams::fromFlat(params.flatten()).flatten() -
         params.flatten()).norm() == 0.0);
}
