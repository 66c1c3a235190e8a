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

#pragma once

#include <memory>

#include "aclfmpc/clf/sliding_surface.hpp"
#include "aclfmpc/mechanics/single_rigid_body.hpp"
#include "aclfmpc/quadruped/contact_schedule.hpp"

namespace aclfmpc {

/// Base pose and twist of the reduced quadruped model. Position and
/// linear velocity in world frame, angular velocity in base frame, ZYX
/// Euler angles with |pitch| < pi/2.
struct QuadrupedState {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  Eigen::Vector3d theta = Eigen::Vector3d::Zero();
  Eigen::Vector3d vp = Eigen::Vector3d::Zero();
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();

  static QuadrupedState unpack(const Eigen::VectorXd& x);
  Eigen::VectorXd pack() const;
  GeneralizedState toGeneralized() const;
};

/// Nominal single-rigid-body parameters of the robot.
struct SrbParams {
  double mass = 50.0;
  Eigen::Matrix3d inertia =
      Eigen::Vector3d(1.0, 3.0, 3.5).asDiagonal().toDenseMatrix();
};

/// Unknown-term parameters of the adaptive wrench: a rigid payload block
/// and a constant-wrench block (world-frame force, base-frame torque).
struct AdaptiveWrenchParams {
  Eigen::VectorXd piIn = Eigen::VectorXd::Zero(10);
  Eigen::VectorXd piF = Eigen::VectorXd::Zero(6);

  Eigen::VectorXd flatten() const;
  static AdaptiveWrenchParams fromFlat(const Eigen::VectorXd& pi16);
};

/// Smoothed friction cone parameters. The surface normal is the contact
/// plane normal in world frame (tilted on slopes).
struct FrictionConeConfig {
  double mu = 0.7;
  double epsilon = 0.5;  // [N] smoothing of the tangential norm
  Eigen::Vector3d surfaceNormal = Eigen::Vector3d::UnitZ();
};

/// Nominal model for one contact mode, as a mechanical system: stacked
/// base-frame contact forces actuate through S, swing feet get zero
/// columns.
std::shared_ptr<SingleRigidBodyModel> makeSrbModel(const SrbParams& params,
                                                   const ContactMode& mode);

/// Kino-dynamic flow with the unknown-term estimate substituted: the
/// adaptive wrench evaluated at (q, v, vr, vrDot) enters as a generalized
/// force on the nominal rigid-body equations. With piHat = 0 this is the
/// nominal flow, bit for bit.
Eigen::VectorXd adaptiveSrbFlow(const Eigen::VectorXd& x,
                                const Eigen::VectorXd& u,
                                const Eigen::VectorXd& piHatFlat,
                                const SrbParams& nominal,
                                const ContactMode& mode,
                                const Eigen::VectorXd& vr,
                                const Eigen::VectorXd& vrDot);

/// Adaptive wrench (f_u base-frame force, t_u base-frame torque) generated
/// by the parameters at the given motion state.
Eigen::VectorXd adaptiveWrench(const Eigen::VectorXd& x,
                               const SlidingSurfaceState& sliding,
                               const Eigen::VectorXd& piHatFlat);

/// Per stance foot, the smoothed cone margin
/// mu*lambda_n - sqrt(|lambda_t|^2 + eps^2) + eps followed by the
/// unilateral margin lambda_n; swing feet are excluded.
Eigen::VectorXd frictionConeConstraints(const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& u,
                                        const ContactMode& mode,
                                        const FrictionConeConfig& config);

/// Swing-foot forces, to be pinned to zero as a state-input equality.
Eigen::VectorXd swingForceEquality(const Eigen::VectorXd& u,
                                   const ContactMode& mode);

/// Input reference distributing the supported weight equally among stance
/// feet so the tracking cost drives || S w - Yn pin || toward zero:
/// the per-foot references sum (in world frame) to
/// m (vpDot_ref - g) + R f_u. Throws std::invalid_argument with no stance
/// feet.
Eigen::VectorXd weightDistributionReference(const PoseReferenceSample& reference,
                                            const ContactMode& mode,
                                            double nominalMass,
                                            const Eigen::VectorXd& piHatFlat);

}  // namespace aclfmpc
