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
#include <stdexcept>

namespace aclfmpc {

class UnmatchedDisturbanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CertaintySplit {
  Eigen::VectorXd auxiliaryInput;  // w with S w = S tau - Yu piHat
  double residual = 0.0;           // || S w - (S tau - Yu piHat) ||
};

/// Decomposes the input tau into a nominal auxiliary input w plus the
/// adaptive disturbance estimate: solves S w = S tau - Yu piHat in the
/// least-squares sense. A residual above tolerance means the estimated
/// disturbance is not matched by the actuation map (e.g. fewer than
/// three contact points).
CertaintySplit trySplitCertaintyEquivalence(const Eigen::VectorXd& tau,
                                            const Eigen::MatrixXd& yu,
                                            const Eigen::VectorXd& piHat,
                                            const Eigen::MatrixXd& S);

/// As trySplitCertaintyEquivalence, but throws UnmatchedDisturbanceError
/// when the residual exceeds tolerance * max(1, ||rhs||).
Eigen::VectorXd certaintyEquivalenceSplit(const Eigen::VectorXd& tau,
                                          const Eigen::MatrixXd& yu,
                                          const Eigen::VectorXd& piHat,
                                          const Eigen::MatrixXd& S,
                                          double tolerance = 1e-9);

}  // namespace aclfmpc
