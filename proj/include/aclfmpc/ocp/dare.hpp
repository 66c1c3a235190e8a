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

#include <functional>
#include <stdexcept>

#include "aclfmpc/ocp/ocp_definition.hpp"

namespace aclfmpc {

class NonStabilizableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-point solution of the discrete-time algebraic Riccati equation
/// P = A'PA - A'PB (R + B'PB)^-1 B'PA + Q. Throws NonStabilizableError
/// when the iteration diverges or fails to converge.
Eigen::MatrixXd solveDare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                          double tol = 1e-13, int maxIterations = 200000);

/// Value function of the LQR obtained from linearizing the flow about an
/// equilibrium (xEq, uEq): discretizes with step dt, weights the stage
/// cost by dt, and solves the resulting Riccati equation. Throws
/// std::invalid_argument when (xEq, uEq) is not an equilibrium within
/// eqTolerance, NonStabilizableError when no stabilizing solution exists.
TerminalCost lqrTerminalCost(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&,
                                        const Eigen::VectorXd&)>& flow,
    const Eigen::MatrixXd& costQ, const Eigen::MatrixXd& costR,
    const Eigen::VectorXd& xEq, const Eigen::VectorXd& uEq, double dt,
    double eqTolerance = 1e-6);

}  // namespace aclfmpc
