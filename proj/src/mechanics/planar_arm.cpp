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

#include "aclfmpc/mechanics/planar_arm.hpp"

#include <cmath>

#include "aclfmpc/math_util.hpp"

namespace aclfmpc {

PlanarArmModel::PlanarArmModel(double mass1, double mass2, double length1,
                               double length2)
    : m1_(mass1), m2_(mass2), l1_(length1), l2_(length2) {
  if (mass1 <= 0.0 || mass2 <= 0.0 || length1 <= 0.0 || length2 <= 0.0) {
    throw std::invalid_argument("planar arm parameters must be positive");
  }
}

void PlanarArmModel::assemble(const GeneralizedState& state, double ma,
                              double mb, Eigen::Matrix2d* M, Eigen::Matrix2d* C,
                              Eigen::Vector2d* g) const {
  const double c1 = std::cos(state.q(0));
  const double c2 = std::cos(state.q(1));
  const double s2 = std::sin(state.q(1));
  const double c12 = std::cos(state.q(0) + state.q(1));
  const double v1 = state.v(0), v2 = state.v(1);

  (*M)(0, 0) = (ma + mb) * l1_ * l1_ + mb * (l2_ * l2_ + 2.0 * l1_ * l2_ * c2);
  (*M)(0, 1) = mb * (l2_ * l2_ + l1_ * l2_ * c2);
  (*M)(1, 0) = (*M)(0, 1);
  (*M)(1, 1) = mb * l2_ * l2_;

  // Christoffel factorization; keeps Mdot - 2C exactly skew-symmetric.
  const double h = -mb * l1_ * l2_ * s2;
  (*C)(0, 0) = h * v2;
  (*C)(0, 1) = h * (v1 + v2);
  (*C)(1, 0) = -h * v1;
  (*C)(1, 1) = 0.0;

  (*g)(0) = (ma + mb) * kGravity * l1_ * c1 + mb * kGravity * l2_ * c12;
  (*g)(1) = mb * kGravity * l2_ * c12;
}

DynamicsTerms PlanarArmModel::dynamicsTerms(const GeneralizedState& state) const {
  Eigen::Matrix2d m, c;
  Eigen::Vector2d g;
  assemble(state, m1_, m2_, &m, &c, &g);
  DynamicsTerms terms;
  terms.M = m;
  terms.C = c;
  terms.g = g;
  terms.S = Eigen::Matrix2d::Identity();
  return terms;
}

Eigen::MatrixXd PlanarArmModel::regressorAccel(const GeneralizedState& state,
                                               const Eigen::VectorXd& accel) const {
  return regressorReference(state, state.v, accel);
}

Eigen::MatrixXd PlanarArmModel::regressorReference(
    const GeneralizedState& state, const Eigen::VectorXd& vr,
    const Eigen::VectorXd& vrDot) const {
  // Per-unit tip mass contribution, evaluated at (q, v, vr, vrDot).
  Eigen::Matrix2d mp, cp;
  Eigen::Vector2d gp;
  assemble(state, 0.0, 1.0, &mp, &cp, &gp);
  Eigen::MatrixXd y(2, 1);
  y.col(0) = mp * vrDot + cp * vr + gp;
  return y;
}

DynamicsTerms PlanarArmModel::payloadTerms(const GeneralizedState& state,
                                           const InertialParameters& payload) const {
  Eigen::Matrix2d mp, cp;
  Eigen::Vector2d gp;
  assemble(state, 0.0, payload.pi(0), &mp, &cp, &gp);
  DynamicsTerms terms;
  terms.M = mp;
  terms.C = cp;
  terms.g = gp;
  return terms;
}

Eigen::Vector2d PlanarArmModel::linkHeights(const Eigen::VectorXd& q) const {
  const double y1 = l1_ * std::sin(q(0));
  const double y2 = y1 + l2_ * std::sin(q(0) + q(1));
  return {y1, y2};
}

}  // namespace aclfmpc
