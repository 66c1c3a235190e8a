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

#include "aclfmpc/mechanics/mechanical_model.hpp"

namespace aclfmpc {

/// Planar 2-link manipulator with point masses at the link ends, gravity
/// along -y, fully actuated (S = I). The unknown term is a single point
/// mass carried at the tip, so parameterDim() == 1.
class PlanarArmModel final : public MechanicalModel {
 public:
  PlanarArmModel(double mass1, double mass2, double length1, double length2);

  int dof() const override { return 2; }
  int inputDim() const override { return 2; }
  int parameterDim() const override { return 1; }

  DynamicsTerms dynamicsTerms(const GeneralizedState& state) const override;
  Eigen::MatrixXd regressorAccel(const GeneralizedState& state,
                                 const Eigen::VectorXd& accel) const override;
  Eigen::MatrixXd regressorReference(const GeneralizedState& state,
                                     const Eigen::VectorXd& vr,
                                     const Eigen::VectorXd& vrDot) const override;
  DynamicsTerms payloadTerms(const GeneralizedState& state,
                             const InertialParameters& payload) const override;

  /// World height of the two point masses, for energy bookkeeping.
  Eigen::Vector2d linkHeights(const Eigen::VectorXd& q) const;

  double mass1() const { return m1_; }
  double mass2() const { return m2_; }
  double length1() const { return l1_; }
  double length2() const { return l2_; }

 private:
  // M, C, g of a 2R arm whose link-end masses are (ma, mb).
  void assemble(const GeneralizedState& state, double ma, double mb,
                Eigen::Matrix2d* M, Eigen::Matrix2d* C,
                Eigen::Vector2d* g) const;

  double m1_, m2_, l1_, l2_;
};

}  // namespace aclfmpc
