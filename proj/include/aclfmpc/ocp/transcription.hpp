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

#include <Eigen/Sparse>

#include "aclfmpc/ocp/ocp_definition.hpp"

namespace aclfmpc {

/// Direct multiple-shooting transcription. Decision variables are the
/// states at all nodes followed by the inputs on all intervals. Dynamics
/// enter as defect equality constraints with one fixed-step RK4 step per
/// interval; state and state-input equalities are hard constraints at the
/// nodes; inequalities contribute relaxed-barrier terms to the cost.
class TranscribedNlp {
 public:
  TranscribedNlp(OcpDefinition ocp, Eigen::VectorXd initialState);

  int varCount() const { return varCount_; }
  int eqCount() const { return eqCount_; }
  int stateIndex(int k) const { return k * ocp_.nx; }
  int inputIndex(int k) const {
    return ocp_.nodeCount * ocp_.nx + k * ocp_.nu;
  }

  const OcpDefinition& ocp() const { return ocp_; }

  /// Hold the initial state, inputs at their references.
  Eigen::VectorXd initialGuess() const;

  /// Warm start from a previous solution shifted to this problem's time
  /// window (linear interpolation on the overlap, last value held).
  Eigen::VectorXd shiftedGuess(const SolverResult& previous) const;

  double cost(const Eigen::VectorXd& z) const;
  Eigen::VectorXd costGradient(const Eigen::VectorXd& z) const;
  Eigen::VectorXd equalityResiduals(const Eigen::VectorXd& z) const;
  Eigen::MatrixXd equalityJacobianDense(const Eigen::VectorXd& z) const;

  struct Linearization {
    double cost = 0.0;
    Eigen::VectorXd gradient;
    std::vector<Eigen::Triplet<double>> hessian;    // Gauss-Newton
    Eigen::VectorXd eqResidual;
    std::vector<Eigen::Triplet<double>> eqJacobian;
  };
  Linearization linearize(const Eigen::VectorXd& z) const;

  /// RK4 map over interval k.
  Eigen::VectorXd flowMap(int k, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& u) const;

  SolverResult decode(const Eigen::VectorXd& z) const;

 private:
  Eigen::VectorXd inequalityStack(int k, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& u) const;

  OcpDefinition ocp_;
  Eigen::VectorXd x0_;
  std::vector<int> g1Rows_;    // per node 0..N-1
  std::vector<int> g2Rows_;    // per node 0..N-2
  std::vector<int> ineqRows_;  // per node 0..N-2
  int varCount_ = 0;
  int eqCount_ = 0;
};

}  // namespace aclfmpc
