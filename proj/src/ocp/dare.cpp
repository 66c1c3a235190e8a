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

#include "aclfmpc/ocp/dare.hpp"

#include "aclfmpc/math_util.hpp"

namespace aclfmpc {

Eigen::MatrixXd solveDare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                          double tol, int maxIterations) {
  Eigen::MatrixXd P = Q;
  for (int it = 0; it < maxIterations; ++it) {
    const Eigen::MatrixXd btp = B.transpose() * P;
    const Eigen::MatrixXd gain =
        (R + btp * B).ldlt().solve(btp * A);  // (R + B'PB)^-1 B'PA
    Eigen::MatrixXd next =
        A.transpose() * P * A - (A.transpose() * P * B) * gain + Q;
    next = 0.5 * (next + next.transpose());
    const double diff = (next - P).lpNorm<Eigen::Infinity>();
    P = next;
    if (!P.allFinite() || P.lpNorm<Eigen::Infinity>() > 1e14) {
      throw NonStabilizableError("Riccati iteration diverged");
    }
    if (diff <= tol * std::max(1.0, P.lpNorm<Eigen::Infinity>())) return P;
  }
  throw NonStabilizableError("Riccati iteration did not converge");
}

TerminalCost lqrTerminalCost(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&,
                                        const Eigen::VectorXd&)>& flow,
    const Eigen::MatrixXd& costQ, const Eigen::MatrixXd& costR,
    const Eigen::VectorXd& xEq, const Eigen::VectorXd& uEq, double dt,
    double eqTolerance) {
  const Eigen::VectorXd residual = flow(0.0, xEq, uEq);
  if (residual.lpNorm<Eigen::Infinity>() > eqTolerance) {
    throw std::invalid_argument("linearization point is not an equilibrium");
  }

  const int nx = static_cast<int>(xEq.size());
  const int nu = static_cast<int>(uEq.size());
  auto discrete = [&](const Eigen::VectorXd& xu) {
    const Eigen::VectorXd x = xu.head(nx);
    const Eigen::VectorXd u = xu.tail(nu);
    return rk4Step(
        [&](double t, const Eigen::VectorXd& xs) { return flow(t, xs, u); },
        0.0, x, dt);
  };
  Eigen::VectorXd xu(nx + nu);
  xu << xEq, uEq;
  const Eigen::MatrixXd j = fdJacobian(discrete, xu);

  TerminalCost terminal;
  terminal.P = solveDare(j.leftCols(nx), j.rightCols(nu), dt * costQ, dt * costR);
  terminal.xRef = xEq;
  return terminal;
}

}  // namespace aclfmpc
