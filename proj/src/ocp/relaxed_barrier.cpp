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

#include "aclfmpc/ocp/relaxed_barrier.hpp"

#include <cmath>

namespace aclfmpc {

double relaxedBarrier(double z, const RelaxedBarrierConfig& config) {
  const double mu = config.mu, delta = config.delta;
  if (z >= delta) return -mu * std::log(z);
  const double s = (z - 2.0 * delta) / delta;
  return mu * (0.5 * s * s - std::log(delta) - 0.5);
}

double relaxedBarrierGrad(double z, const RelaxedBarrierConfig& config) {
  const double mu = config.mu, delta = config.delta;
  if (z >= delta) return -mu / z;
  return mu * (z - 2.0 * delta) / (delta * delta);
}

double relaxedBarrierHess(double z, const RelaxedBarrierConfig& config) {
  const double mu = config.mu, delta = config.delta;
  if (z >= delta) return mu / (z * z);
  return mu / (delta * delta);
}

double barrierSoftTolerance(const RelaxedBarrierConfig& config) {
  // Violation depth where the quadratic branch's restoring slope,
  // mu (2 delta - z) / delta^2, reaches the scale of the stage-cost
  // gradients it competes against in the force-level problems.
  constexpr double kCostPressureScale = 2e4;
  return config.delta * (2.0 + std::sqrt(2.0 / config.mu)) +
         config.delta * config.delta * kCostPressureScale / config.mu;
}

}  // namespace aclfmpc
