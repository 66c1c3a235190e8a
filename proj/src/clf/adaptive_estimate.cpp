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

#include "aclfmpc/clf/adaptive_estimate.hpp"

namespace aclfmpc {

AdaptiveEstimate AdaptiveEstimate::zero(const Eigen::MatrixXd& gamma,
                                        const Eigen::VectorXd& scale) {
  AdaptiveEstimate e;
  e.piHat = Eigen::VectorXd::Zero(gamma.rows());
  e.gamma = gamma;
  // Box at +-10x the declared parameter scale, guarding against drift
  // when the reference stops exciting the estimate.
  e.upperBound = 10.0 * scale.cwiseAbs();
  e.lowerBound = -e.upperBound;
  return e;
}

EstimateUpdate updateEstimate(const AdaptiveEstimate& estimate,
                              const SlidingSurfaceState& sliding,
                              const Eigen::MatrixXd& yu, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  EstimateUpdate out;
  out.next = estimate;
  out.next.piHat += dt * (estimate.gamma * (yu.transpose() * sliding.sigma));
  for (int i = 0; i < out.next.piHat.size(); ++i) {
    if (out.next.piHat(i) < estimate.lowerBound(i)) {
      out.next.piHat(i) = estimate.lowerBound(i);
      out.clampMask |= (1u << i);
    } else if (out.next.piHat(i) > estimate.upperBound(i)) {
      out.next.piHat(i) = estimate.upperBound(i);
      out.clampMask |= (1u << i);
    }
  }
  return out;
}

}  // namespace aclfmpc
