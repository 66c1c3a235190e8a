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

namespace aclfmpc {

/// Parameters of the relaxed log-barrier penalty used for inequality
/// constraints h >= 0.
struct RelaxedBarrierConfig {
  double mu = 0.1;      // barrier weight
  double delta = 1e-3;  // relaxation threshold
};

/// Relaxed log-barrier penalty: -mu ln(z) for z >= delta, and the C2
/// quadratic extension mu (1/2 ((z - 2 delta)/delta)^2 - ln(delta) - 1/2)
/// below. Defined on all of R, convex, monotone decreasing.
double relaxedBarrier(double z, const RelaxedBarrierConfig& config);

/// First and second derivatives of relaxedBarrier with respect to z.
double relaxedBarrierGrad(double z, const RelaxedBarrierConfig& config);
double relaxedBarrierHess(double z, const RelaxedBarrierConfig& config);

/// Violation depth at which the penalty pressure is comparable to a
/// unit-scale cost gradient; used as the soft-constraint tolerance
/// eps_soft in closed-loop diagnostics.
double barrierSoftTolerance(const RelaxedBarrierConfig& config);

}  // namespace aclfmpc
