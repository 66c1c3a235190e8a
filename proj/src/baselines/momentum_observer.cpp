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

#include "aclfmpc/baselines/momentum_observer.hpp"

namespace aclfmpc {

MomentumObserverState MomentumObserverState::make(const Eigen::MatrixXd& gain,
                                                  int dim) {
  Eigen::LLT<Eigen::MatrixXd> llt(gain);
  if (gain.rows() != dim || llt.info() != Eigen::Success) {
    throw std::invalid_argument("observer gain must be positive definite");
  }
  MomentumObserverState s;
  s.gain = gain;
  s.momentumIntegral = Eigen::VectorXd::Zero(dim);
  s.wrenchEstimate = Eigen::VectorXd::Zero(dim);
  s.initialMomentum = Eigen::VectorXd::Zero(dim);
  return s;
}

MomentumObserverState momentumObserverStep(const MomentumObserverState& observer,
                                           const DynamicsTerms& nominalTerms,
                                           const Eigen::VectorXd& v,
                                           const Eigen::VectorXd& tau,
                                           double dt) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  MomentumObserverState next = observer;
  const Eigen::VectorXd momentum = nominalTerms.M * v;
  if (!next.initialized) {
    // First sample anchors the momentum balance; nothing has been
    // applied yet, so the estimate stays zero.
    next.initialMomentum = momentum;
    next.initialized = true;
    next.wrenchEstimate.setZero();
    return next;
  }
  next.momentumIntegral +=
      dt * (nominalTerms.S * tau + nominalTerms.C.transpose() * v -
            nominalTerms.g + observer.wrenchEstimate);
  next.wrenchEstimate =
      observer.gain * (momentum - next.initialMomentum - next.momentumIntegral);
  return next;
}

}  // namespace aclfmpc
