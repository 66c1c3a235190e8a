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

#include <optional>

#include "aclfmpc/ocp/transcription.hpp"

namespace aclfmpc {

struct SqpSettings {
  int maxIterations = 50;
  double tolerance = 1e-8;
  int maxLineSearchSteps = 25;
  // Levenberg-style diagonal shift applied when the KKT factorization is
  // near-singular; escalates by powers of ten from this base.
  double regularization = 1e-8;
};

/// Gauss-Newton SQP with an exact-penalty merit line search. Equality
/// constraints are linearized, barrier terms contribute exact penalty
/// Hessians, and the KKT system is factorized sparsely. Returns the best
/// iterate; on line-search failure the convergence flag is false and the
/// current residuals are reported. A solver instance owns no state beyond
/// the call, so concurrent solves on different problems are safe.
SolverResult solveSqp(const TranscribedNlp& nlp,
                      const std::optional<Eigen::VectorXd>& warmStart,
                      const SqpSettings& settings = {});

}  // namespace aclfmpc
