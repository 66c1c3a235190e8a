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

#include "aclfmpc/quadruped/quadruped_model.hpp"

#include <cmath>

#include "aclfmpc/math_util.hpp"

namespace aclfmpc {
namespace {
const Eigen::Vector3d kGravityVec(0.0, 0.0, -kGravity);
}

QuadrupedState QuadrupedState::unpack(const Eigen::VectorXd& x) {
  QuadrupedState s;
  s.p = x.segment<3>(0);
  s.theta = x.segment<3>(3);
  s.vp = x.segment<3>(6);
  s.omega = x.segment<3>(9);
  return s;
}

Eigen::VectorXd QuadrupedState::pack() const {
  Eigen::VectorXd x(12);
  x << p, theta, vp, omega;
  return x;
}

GeneralizedState QuadrupedState::toGeneralized() const {
  GeneralizedState gs;
  gs.q.resize(6);
  gs.q << p, theta;
  gs.v.resize(6);
  gs.v << vp, omega;
  return gs;
}

Eigen::VectorXd AdaptiveWrenchParams::flatten() const {
  Eigen::VectorXd pi(16);
  pi << piIn, piF;
  return pi;
}

AdaptiveWrenchParams AdaptiveWrenchParams::fromFlat(const Eigen::VectorXd& pi16) {
  AdaptiveWrenchParams p;
  p.piIn = pi16.head<10>();
  p.piF = pi16.tail<6>();
  return p;
}

std::shared_ptr<SingleRigidBodyModel> makeSrbModel(const SrbParams& params,
                                                   const ContactMode& mode) {
  std::vector<Eigen::Vector3d> points(mode.footPositionWorld.begin(),
                                      mode.footPositionWorld.end());
  std::vector<bool> active(mode.inContact.begin(), mode.inContact.end());
  return std::make_shared<SingleRigidBodyModel>(params.mass, params.inertia,
                                                std::move(points),
                                                std::move(active));
}

Eigen::VectorXd adaptiveSrbFlow(const Eigen::VectorXd& x,
                                const Eigen::VectorXd& u,
                                const Eigen::VectorXd& piHatFlat,
                                const SrbParams& nominal,
                                const ContactMode& mode,
                                const Eigen::VectorXd& vr,
                                const Eigen::VectorXd& vrDot) {
  const QuadrupedState s = QuadrupedState::unpack(x);
  if (!chartValid(s.theta)) {
    throw ChartSingularityError("pitch too close to +-pi/2");
  }
  const Eigen::Matrix3d r = rotationZyx(s.theta);

  // Generalized unknown-term force (linear rows world, rotational base).
  Eigen::VectorXd gen = Eigen::VectorXd::Zero(6);
  if (piHatFlat.size() > 0) {
    Eigen::VectorXd q6(6), v6(6);
    q6 << s.p, s.theta;
    v6 << s.vp, s.omega;
    gen = srbRegressorReference(q6, v6, vr, vrDot) * piHatFlat;
  }

  Eigen::Vector3d sumForceWorld = Eigen::Vector3d::Zero();
  Eigen::Vector3d sumTorqueBase = Eigen::Vector3d::Zero();
  for (int i = 0; i < kNumFeet; ++i) {
    if (!mode.inContact[i]) continue;
    const Eigen::Vector3d lambda = u.segment<3>(3 * i);
    sumForceWorld += r * lambda;
    const Eigen::Vector3d lever =
        r.transpose() * (mode.footPositionWorld[i] - s.p);
    sumTorqueBase += lever.cross(lambda);
  }

  Eigen::VectorXd xdot(12);
  xdot.segment<3>(0) = s.vp;
  xdot.segment<3>(3) = eulerRateMap(s.theta) * s.omega;
  xdot.segment<3>(6) =
      kGravityVec + (sumForceWorld - gen.head<3>()) / nominal.mass;
  xdot.segment<3>(9) = nominal.inertia.ldlt().solve(
      -s.omega.cross(nominal.inertia * s.omega) + sumTorqueBase -
      gen.tail<3>());
  return xdot;
}

Eigen::VectorXd adaptiveWrench(const Eigen::VectorXd& x,
                               const SlidingSurfaceState& sliding,
                               const Eigen::VectorXd& piHatFlat) {
  const QuadrupedState s = QuadrupedState::unpack(x);
  Eigen::VectorXd q6(6), v6(6);
  q6 << s.p, s.theta;
  v6 << s.vp, s.omega;
  const Eigen::VectorXd gen =
      srbRegressorReference(q6, v6, sliding.vr, sliding.vrDot) * piHatFlat;
  Eigen::VectorXd wrench(6);
  wrench.head<3>() = rotationZyx(s.theta).transpose() * gen.head<3>();
  wrench.tail<3>() = gen.tail<3>();
  return wrench;
}

Eigen::VectorXd frictionConeConstraints(const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& u,
                                        const ContactMode& mode,
                                        const FrictionConeConfig& config) {
  const QuadrupedState s = QuadrupedState::unpack(x);
  const Eigen::Matrix3d r = rotationZyx(s.theta);
  const Eigen::Vector3d n = config.surfaceNormal.normalized();

  Eigen::VectorXd h(2 * mode.stanceCount());
  int row = 0;
  for (int i = 0; i < kNumFeet; ++i) {
    if (!mode.inContact[i]) continue;
    const Eigen::Vector3d lambdaWorld = r * u.segment<3>(3 * i);
    const double normal = n.dot(lambdaWorld);
    const Eigen::Vector3d tangential = lambdaWorld - normal * n;
    h(row++) = config.mu * normal -
               std::sqrt(tangential.squaredNorm() +
                         config.epsilon * config.epsilon) +
               config.epsilon;
    h(row++) = normal;
  }
  return h;
}

Eigen::VectorXd swingForceEquality(const Eigen::VectorXd& u,
                                   const ContactMode& mode) {
  Eigen::VectorXd g(3 * (kNumFeet - mode.stanceCount()));
  int row = 0;
  for (int i = 0; i < kNumFeet; ++i) {
    if (mode.inContact[i]) continue;
    g.segment<3>(row) = u.segment<3>(3 * i);
    row += 3;
  }
  return g;
}

Eigen::VectorXd weightDistributionReference(const PoseReferenceSample& reference,
                                            const ContactMode& mode,
                                            double nominalMass,
                                            const Eigen::VectorXd& piHatFlat) {
  const int stance = mode.stanceCount();
  if (stance == 0) throw std::invalid_argument("no stance feet to load");

  const Eigen::Matrix3d r = reference.orientation.toRotationMatrix();
  Eigen::Vector3d adaptiveForceWorld = Eigen::Vector3d::Zero();
  if (piHatFlat.size() > 0) {
    Eigen::VectorXd q6(6), v6(6), vrDot(6);
    q6 << reference.position, eulerZyxFromQuaternion(reference.orientation);
    v6 << reference.linearVelocity, reference.angularVelocity;
    vrDot << reference.linearAcceleration, reference.angularAcceleration;
    adaptiveForceWorld =
        (srbRegressorReference(q6, v6, v6, vrDot) * piHatFlat).head<3>();
  }

  const Eigen::Vector3d totalWorld =
      nominalMass * (reference.linearAcceleration - kGravityVec) +
      adaptiveForceWorld;
  const Eigen::Vector3d perFootBase = r.transpose() * totalWorld / stance;

  Eigen::VectorXd uRef = Eigen::VectorXd::Zero(3 * kNumFeet);
  for (int i = 0; i < kNumFeet; ++i) {
    if (mode.inContact[i]) uRef.segment<3>(3 * i) = perFootBase;
  }
  return uRef;
}

}  // namespace aclfmpc
