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

#include <Eigen/Dense>

#include "aclfmpc/mechanics/mechanical_model.hpp"

namespace aclfmpc {

/// Generalized-momentum residual observer: the wrench estimate w tracks
/// the external generalized force with first-order dynamics
/// wDot = K (wTrue - w), so a constant disturbance is recovered as
/// w(t) = wTrue (1 - exp(-K t)).
struct MomentumObserverState {
  Eigen::VectorXd momentumIntegral;  // integral of (S tau + C'v - g + w)
  Eigen::VectorXd wrenchEstimate;    // applied-disturbance convention
  Eigen::MatrixXd gain;              // positive definite [1/s]
  Eigen::VectorXd initialMomentum;
  bool initialized = false;

  static MomentumObserverState make(const Eigen::MatrixXd& gain, int dim);
};

/// One forward-Euler update over dt given the nominal terms at the
/// current state and the torques applied over the elapsed interval.
MomentumObserverState momentumObserverStep(const MomentumObserverState& observer,
                                           const DynamicsTerms& nominalTerms,
                                           const Eigen::VectorXd& v,
                                           const Eigen::VectorXd& tau,
                                           double dt);

}  // namespace aclfmpc
