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
#include <functional>
#include <optional>
#include <vector>

#include "aclfmpc/ocp/relaxed_barrier.hpp"

namespace aclfmpc {

/// Quadratic value-function terminal penalty about a reference point:
/// phi(x) = 1/2 (x - xRef)' P (x - xRef).
struct TerminalCost {
  Eigen::MatrixXd P;
  Eigen::VectorXd xRef;
};

/// Finite-horizon optimal control problem over a time window
/// [startTime, startTime + horizon]. Stage cost is quadratic tracking;
/// inequality constraints enter the cost through the relaxed barrier,
/// equality constraints are hard. All callables take absolute time, so
/// mode schedules and time-varying references live inside them.
struct OcpDefinition {
  int nx = 0;
  int nu = 0;
  double horizon = 1.0;
  int nodeCount = 21;
  double startTime = 0.0;

  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&,
                                const Eigen::VectorXd&)>
      flow;

  Eigen::MatrixXd Q;  // state weight, positive semidefinite
  Eigen::MatrixXd R;  // input weight, positive definite
  std::function<Eigen::VectorXd(double)> stateRef;
  std::function<Eigen::VectorXd(double)> inputRef;
  std::optional<TerminalCost> terminal;

  // Optional constraint stacks; empty std::function means none.
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> stateEquality;
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&,
                                const Eigen::VectorXd&)>
      stateInputEquality;
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&,
                                const Eigen::VectorXd&)>
      inequality;

  RelaxedBarrierConfig barrier;

  double nodeInterval() const { return horizon / (nodeCount - 1); }
  double nodeTime(int k) const { return startTime + k * nodeInterval(); }

  void validate() const;
};

/// Outcome of one SQP solve.
struct SolverResult {
  std::vector<Eigen::VectorXd> states;            // nodeCount entries
  std::vector<Eigen::VectorXd> inputs;            // nodeCount - 1 entries
  std::vector<Eigen::VectorXd> inequalityValues;  // per input node
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  double kktResidual = 0.0;
  double equalityResidual = 0.0;
  double maxDefect = 0.0;
  double startTime = 0.0;
  Eigen::VectorXd decision;  // raw stacked variables, for warm starting
};

}  // namespace aclfmpc
