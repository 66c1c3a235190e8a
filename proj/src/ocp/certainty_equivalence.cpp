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

#include "aclfmpc/ocp/certainty_equivalence.hpp"

#include <sstream>

namespace aclfmpc {

CertaintySplit trySplitCertaintyEquivalence(const Eigen::VectorXd& tau,
                                            const Eigen::MatrixXd& yu,
                                            const Eigen::VectorXd& piHat,
                                            const Eigen::MatrixXd& S) {
  // Solve for the input correction carrying the disturbance estimate, so
  // w = tau exactly when the estimate vanishes. The residual measures how
  // much of Yu piHat lies outside the actuation range.
  const Eigen::VectorXd disturbance = yu * piHat;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(S);
  const Eigen::VectorXd correction = cod.solve(disturbance);
  CertaintySplit split;
  split.auxiliaryInput = tau - correction;
  split.residual = (S * correction - disturbance).norm();
  return split;
}

Eigen::VectorXd certaintyEquivalenceSplit(const Eigen::VectorXd& tau,
                                          const Eigen::MatrixXd& yu,
                                          const Eigen::VectorXd& piHat,
                                          const Eigen::MatrixXd& S,
                                          double tolerance) {
  const CertaintySplit split = trySplitCertaintyEquivalence(tau, yu, piHat, S);
  const double scale = std::max(1.0, (yu * piHat).lpNorm<Eigen::Infinity>());
  if (split.residual > tolerance * scale) {
    std::ostringstream oss;
    oss << "estimated disturbance is not matched by the actuation map "
           "(residual "
        << split.residual << ")";
    throw UnmatchedDisturbanceError(oss.str());
  }
  return split.auxiliaryInput;
}

}  // namespace aclfmpc
