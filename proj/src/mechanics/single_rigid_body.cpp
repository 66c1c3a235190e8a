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

#include "aclfmpc/mechanics/single_rigid_body.hpp"

#include <cmath>
#include <sstream>

#include "aclfmpc/math_util.hpp"

namespace aclfmpc {
namespace {
const Eigen::Vector3d kGravityUp(0.0, 0.0, kGravity);
}

SingleRigidBodyModel::SingleRigidBodyModel(
    double mass, const Eigen::Matrix3d& inertia,
    std::vector<Eigen::Vector3d> contactPointsWorld,
    std::vector<bool> contactActive)
    : mass_(mass),
      inertia_(inertia),
      points_(std::move(contactPointsWorld)),
      active_(std::move(contactActive)) {
  if (mass_ <= 0.0) throw std::invalid_argument("mass must be positive");
  if (active_.size() != points_.size()) {
    throw std::invalid_argument("contact flags/points size mismatch");
  }
  if (!inertia_.isApprox(inertia_.transpose(), 1e-12)) {
    throw std::invalid_argument("inertia must be symmetric");
  }
}

void SingleRigidBodyModel::checkChart(const GeneralizedState& state) const {
  if (!chartValid(state.q.segment<3>(3))) {
    throw ChartSingularityError("pitch too close to +-pi/2");
  }
}

DynamicsTerms SingleRigidBodyModel::dynamicsTerms(const GeneralizedState& state) const {
  checkChart(state);
  const Eigen::Matrix3d r = rotationZyx(state.q.segment<3>(3));
  const Eigen::Vector3d omega = state.v.segment<3>(3);

  DynamicsTerms terms;
  terms.M = Eigen::MatrixXd::Zero(6, 6);
  terms.M.topLeftCorner<3, 3>() = mass_ * Eigen::Matrix3d::Identity();
  terms.M.bottomRightCorner<3, 3>() = inertia_;

  terms.C = Eigen::MatrixXd::Zero(6, 6);
  terms.C.bottomRightCorner<3, 3>() = -skew(inertia_ * omega);

  terms.g = Eigen::VectorXd::Zero(6);
  terms.g.head<3>() = mass_ * kGravityUp;

  terms.S = Eigen::MatrixXd::Zero(6, inputDim());
  for (int i = 0; i < contactCount(); ++i) {
    if (!active_[i]) continue;
    terms.S.block<3, 3>(0, 3 * i) = r;
    terms.S.block<3, 3>(3, 3 * i) = skew(leverArm(state, i));
  }
  return terms;
}

Eigen::Vector3d SingleRigidBodyModel::leverArm(const GeneralizedState& state,
                                               int point) const {
  const Eigen::Matrix3d r = rotationZyx(state.q.segment<3>(3));
  return r.transpose() * (points_[point] - state.q.head<3>());
}

Eigen::VectorXd SingleRigidBodyModel::positionDerivative(
    const GeneralizedState& state) const {
  checkChart(state);
  Eigen::VectorXd qdot(6);
  qdot.head<3>() = state.v.head<3>();
  qdot.tail<3>() = eulerRateMap(state.q.segment<3>(3)) * state.v.segment<3>(3);
  return qdot;
}

Eigen::MatrixXd SingleRigidBodyModel::regressorAccel(
    const GeneralizedState& state, const Eigen::VectorXd& accel) const {
  return regressorReference(state, state.v, accel);
}

Eigen::MatrixXd SingleRigidBodyModel::regressorReference(
    const GeneralizedState& state, const Eigen::VectorXd& vr,
    const Eigen::VectorXd& vrDot) const {
  return srbRegressorReference(state.q, state.v, vr, vrDot);
}

Eigen::MatrixXd srbRegressorReference(const Eigen::VectorXd& q,
                                      const Eigen::VectorXd& v,
                                      const Eigen::VectorXd& vr,
                                      const Eigen::VectorXd& vrDot) {
  const Eigen::Matrix3d r = rotationZyx(q.segment<3>(3));
  const Eigen::Vector3d omega = v.segment<3>(3);
  const Eigen::Vector3d vrRot = vr.segment<3>(3);
  const Eigen::Vector3d arLin = vrDot.head<3>() + kGravityUp;
  const Eigen::Vector3d arRot = vrDot.segment<3>(3);

  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(6, SingleRigidBodyModel::kParamDim);
  // mass column
  y.block<3, 1>(0, 0) = arLin;
  // first-moment columns (h = m c): the payload inertia couples the linear
  // and rotational blocks through R.
  y.block<3, 3>(0, 1) = r * (skew(arRot) + skew(omega) * skew(vrRot));
  y.block<3, 3>(3, 1) = -skew(r.transpose() * arLin);
  // inertia columns (about the base reference point)
  y.block<3, 6>(3, 4) =
      inertiaVecOperator(arRot) + skew(vrRot) * inertiaVecOperator(omega);
  // constant wrench columns: identity in generalized coordinates
  y.block<6, 6>(0, 10).setIdentity();
  return y;
}

DynamicsTerms SingleRigidBodyModel::payloadTerms(
    const GeneralizedState& state, const InertialParameters& payload) const {
  if (payload.pi.size() != kInertialDim && payload.pi.size() != kParamDim) {
    throw std::invalid_argument("payload parameter vector must have 10 or 16 entries");
  }
  const double m = payload.pi(0);
  const Eigen::Vector3d h = payload.pi.segment<3>(1);
  const Eigen::Matrix3d iRef = inertiaFromVech(payload.pi.segment<6>(4));
  const Eigen::Matrix3d r = rotationZyx(state.q.segment<3>(3));
  const Eigen::Vector3d omega = state.v.segment<3>(3);
  const Eigen::Matrix3d hx = skew(h);

  DynamicsTerms terms;
  terms.M = Eigen::MatrixXd::Zero(6, 6);
  terms.M.topLeftCorner<3, 3>() = m * Eigen::Matrix3d::Identity();
  terms.M.topRightCorner<3, 3>() = -r * hx;
  terms.M.bottomLeftCorner<3, 3>() = hx * r.transpose();
  terms.M.bottomRightCorner<3, 3>() = iRef;

  terms.C = Eigen::MatrixXd::Zero(6, 6);
  terms.C.topRightCorner<3, 3>() = -r * skew(omega) * hx;
  terms.C.bottomRightCorner<3, 3>() = -skew(iRef * omega);

  terms.g = Eigen::VectorXd::Zero(6);
  terms.g.head<3>() = m * kGravityUp;
  terms.g.tail<3>() = hx * (r.transpose() * kGravityUp);

  if (payload.pi.size() == kParamDim) {
    terms.g += payload.pi.segment<6>(10);
  }
  return terms;
}

Eigen::VectorXd rigidPayloadParameters(double mass, const Eigen::Vector3d& com,
                                       const Eigen::Matrix3d& inertiaAtCom) {
  Eigen::VectorXd pi(SingleRigidBodyModel::kInertialDim);
  pi(0) = mass;
  pi.segment<3>(1) = mass * com;
  const Eigen::Matrix3d shift =
      mass * (com.squaredNorm() * Eigen::Matrix3d::Identity() -
              com * com.transpose());
  pi.segment<6>(4) = vechFromInertia(inertiaAtCom + shift);
  return pi;
}

std::string validateRigidPayload(const Eigen::VectorXd& pi10, double tol) {
  std::ostringstream oss;
  const double m = pi10(0);
  if (m < -tol) {
    oss << "payload mass is negative: " << m;
    return oss.str();
  }
  if (m > tol) {
    const Eigen::Vector3d c = pi10.segment<3>(1) / m;
    const Eigen::Matrix3d iRef = inertiaFromVech(pi10.segment<6>(4));
    const Eigen::Matrix3d iCom =
        iRef - m * (c.squaredNorm() * Eigen::Matrix3d::Identity() -
                    c * c.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(iCom);
    if (es.eigenvalues().minCoeff() < -tol * std::max(1.0, iCom.norm())) {
      oss << "payload CoM inertia not positive semidefinite, eigenvalue "
          << es.eigenvalues().minCoeff();
      return oss.str();
    }
  }
  return {};
}

}  // namespace aclfmpc
