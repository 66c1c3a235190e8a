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

#include "aclfmpc/mechanics/mechanical_model.hpp"

namespace aclfmpc {

/// Ground truth of the simulated plant: the nominal model plus a payload
/// hidden from the controller and a constant wrench applied to the base
/// (world-frame force, base-frame torque, stacked in generalized
/// coordinates). Controllers never see this object; only the simulation
/// plant integrates it.
struct PlantTruth {
  std::shared_ptr<const MechanicalModel> nominal;
  InertialParameters payload;          // model-specific layout
  Eigen::VectorXd externalWrench;      // applied, generalized coordinates (n)

  /// Unknown-term parameters that reproduce this truth through the
  /// nominal model's regressor (the applied wrench enters with a sign
  /// flip: it resists on the left-hand side of the dynamics).
  Eigen::VectorXd trueParameters() const;
};

/// Forward dynamics of the true plant: solves the combined (nominal +
/// payload) equation for vdot under actuation tau and the applied wrench.
/// Throws std::runtime_error when the combined inertia is not positive
/// definite.
Eigen::VectorXd trueForwardDynamics(const PlantTruth& plant,
                                    const GeneralizedState& state,
                                    const Eigen::VectorXd& tau);

}  // namespace aclfmpc
