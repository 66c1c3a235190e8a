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

#include "aclfmpc/mechanics/plant_truth.hpp"

#include "aclfmpc/mechanics/single_rigid_body.hpp"

namespace aclfmpc {

Eigen::VectorXd PlantTruth::trueParameters() const {
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(nominal->parameterDim());
  pi.head(payload.pi.size()) = payload.pi;
  if (pi.size() == SingleRigidBodyModel::kParamDim &&
      payload.pi.size() == SingleRigidBodyModel::kInertialDim) {
    pi.tail<6>() = -externalWrench;
  }
  return pi;
}

Eigen::VectorXd trueForwardDynamics(const PlantTruth& plant,
                                    const GeneralizedState& state,
                                    const Eigen::VectorXd& tau) {
  const DynamicsTerms nom = plant.nominal->dynamicsTerms(state);
  const DynamicsTerms pay = plant.nominal->payloadTerms(state, plant.payload);

  const Eigen::MatrixXd m = nom.M + pay.M;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  if (ldlt.info() != Eigen::Success ||
      (ldlt.vectorD().array() <= 0.0).any()) {
    throw std::runtime_error("combined inertia is not positive definite");
  }
  const Eigen::VectorXd rhs = nom.S * tau + plant.externalWrench -
                              (nom.C + pay.C) * state.v - nom.g - pay.g;
  return ldlt.solve(rhs);
}

}  // namespace aclfmpc
