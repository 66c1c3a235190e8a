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

#include <vector>

#include "aclfmpc/mechanics/mechanical_model.hpp"

namespace aclfmpc {

/// Floating single rigid body in a mixed-frame parametrization:
///   q = (CoM position p, world frame; ZYX Euler angles roll/pitch/yaw)
///   v = (CoM velocity, world frame; angular velocity omega, base frame)
/// Actuation is a stack of point contact forces expressed in base frame,
/// acting at world-fixed contact points; inactive points get zero columns
/// in S.
///
/// The unknown-term parameter vector has 16 entries: a rigid payload
/// (mass, first moment m*c in base frame, inertia about the base reference
/// point, vech order) followed by a constant wrench (world-frame force,
/// base-frame torque). In generalized coordinates the wrench block of the
/// regressor is the identity.
class SingleRigidBodyModel final : public MechanicalModel {
 public:
  SingleRigidBodyModel(double mass, const Eigen::Matrix3d& inertia,
                       std::vector<Eigen::Vector3d> contactPointsWorld,
                       std::vector<bool> contactActive);

  static constexpr int kParamDim = 16;     // 10 inertial + 6 constant wrench
  static constexpr int kInertialDim = 10;

  int dof() const override { return 6; }
  int inputDim() const override { return 3 * static_cast<int>(points_.size()); }
  int parameterDim() const override { return kParamDim; }

  DynamicsTerms dynamicsTerms(const GeneralizedState& state) const override;
  Eigen::MatrixXd regressorAccel(const GeneralizedState& state,
                                 const Eigen::VectorXd& accel) const override;
  Eigen::MatrixXd regressorReference(const GeneralizedState& state,
                                     const Eigen::VectorXd& vr,
                                     const Eigen::VectorXd& vrDot) const override;
  DynamicsTerms payloadTerms(const GeneralizedState& state,
                             const InertialParameters& payload) const override;

  /// Contact point position relative to the CoM, base frame.
  Eigen::Vector3d leverArm(const GeneralizedState& state, int point) const;

  double mass() const { return mass_; }
  const Eigen::Matrix3d& inertia() const { return inertia_; }
  int contactCount() const { return static_cast<int>(points_.size()); }
  bool contactIsActive(int i) const { return active_[i]; }
  const Eigen::Vector3d& contactPointWorld(int i) const { return points_[i]; }

  /// Kinematic map qdot = (v_p, T(theta) omega).
  Eigen::VectorXd positionDerivative(const GeneralizedState& state) const;

 private:
  void checkChart(const GeneralizedState& state) const;

  double mass_;
  Eigen::Matrix3d inertia_;
  std::vector<Eigen::Vector3d> points_;
  std::vector<bool> active_;
};

/// Regressor of the 16-parameter unknown term in generalized coordinates,
/// evaluated at (q, v, vr, vrDot). Independent of the nominal inertia and
/// contact set.
Eigen::MatrixXd srbRegressorReference(const Eigen::VectorXd& q,
                                      const Eigen::VectorXd& v,
                                      const Eigen::VectorXd& vr,
                                      const Eigen::VectorXd& vrDot);

/// Builds the 10-entry rigid-payload block from mass, CoM offset (base
/// frame) and inertia about the payload CoM, applying the parallel-axis
/// shift to the base reference point.
Eigen::VectorXd rigidPayloadParameters(double mass, const Eigen::Vector3d& com,
                                       const Eigen::Matrix3d& inertiaAtCom);

/// Validates the rigid-payload invariants: mass >= 0 and, for positive
/// mass, positive semidefinite inertia about the payload CoM. Returns an
/// empty string when valid, a diagnostic otherwise.
std::string validateRigidPayload(const Eigen::VectorXd& pi10, double tol = 1e-9);

}  // namespace aclfmpc
