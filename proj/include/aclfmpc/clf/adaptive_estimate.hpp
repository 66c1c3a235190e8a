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

#include <cstdint>

#include "aclfmpc/clf/sliding_surface.hpp"

namespace aclfmpc {

/// Unknown-parameter estimate with its adaptation gain and projection box.
/// Owned and mutated only by the control loop of a single scenario run.
struct AdaptiveEstimate {
  Eigen::VectorXd piHat;
  Eigen::MatrixXd gamma;        // symmetric positive (semi)definite
  Eigen::VectorXd lowerBound;   // elementwise projection box
  Eigen::VectorXd upperBound;

  static AdaptiveEstimate zero(const Eigen::MatrixXd& gamma,
                               const Eigen::VectorXd& scale);
};

struct EstimateUpdate {
  AdaptiveEstimate next;
  std::uint32_t clampMask = 0;  // bit i set when entry i hit the box
};

/// One forward-Euler step of piHatDot = Gamma * Yu' * sigma over dt,
/// followed by projection onto the box. The estimate is unchanged when
/// sigma = 0.
EstimateUpdate updateEstimate(const AdaptiveEstimate& estimate,
                              const SlidingSurfaceState& sliding,
                              const Eigen::MatrixXd& yu, double dt);

}  // namespace aclfmpc
