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

#include "aclfmpc/simlab/scenario.hpp"

namespace aclfmpc {

/// Assembled pieces of a quadruped scenario, exposed so tests can reuse
/// the construction.
struct QuadrupedSetup {
  SrbParams nominal;
  std::shared_ptr<const ContactSchedule> schedule;
  std::shared_ptr<const PoseReference> reference;
  PlantTruth truth;  // nominal model slot filled per mode during integration
  FrictionConeConfig cone;
  MpcConfig mpc;
  Eigen::VectorXd initialState;
};

struct ArmSetup {
  std::shared_ptr<const PlanarArmModel> nominal;
  std::shared_ptr<const JointReference> reference;
  PlantTruth truth;
  MpcConfig mpc;
  Eigen::VectorXd initialState;
};

QuadrupedSetup buildQuadrupedSetup(const Scenario& scenario);
ArmSetup buildArmSetup(const Scenario& scenario);

/// Closed loop: measure exactly, update the estimate, solve the MPC,
/// apply the first input to the true plant integrated with RK4 substeps,
/// log one row per control step. Deterministic given the scenario seed.
ScenarioResult runScenario(const Scenario& scenario);

/// Root-mean-square errors over aligned samples, skipping an initial
/// transient window.
std::pair<double, double> computeRmse(const std::vector<StepLog>& trace,
                                      double skipInitial = 0.2);

struct SweepRow {
  double force = 0.0;
  ScenarioResult::Verdict adaptive = ScenarioResult::Verdict::Stable;
  ScenarioResult::Verdict observer = ScenarioResult::Verdict::Stable;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double maxToleratedAdaptive = -1.0;
  double maxToleratedObserver = -1.0;
};

/// Runs the slope-walk scenario over the force grid under both the
/// adaptive controller and the momentum-observer baseline, recording the
/// largest force each one tolerates.
SweepResult slopeForceSweep(const Scenario& baseScenario,
                            const std::vector<double>& forceGrid,
                            int parallelism = 1);

}  // namespace aclfmpc
