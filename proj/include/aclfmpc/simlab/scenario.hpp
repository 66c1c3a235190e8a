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

#include <string>

#include "aclfmpc/baselines/mpc_controller.hpp"

namespace aclfmpc {

/// Fully materialized description of one closed-loop run. Every field has
/// a usable default so configuration files only state what they change.
struct Scenario {
  std::string name = "scenario";
  std::string model = "quadruped";  // "quadruped" | "arm2link"
  ControllerVariant variant = ControllerVariant::AclfMpc;

  double duration = 16.0;       // [s]
  double horizon = 1.0;         // [s]
  int nodes = 21;
  double controlPeriod = 0.01;  // [s]
  int plantSubsteps = 10;       // plant RK4 steps per control period
  unsigned seed = 1;

  // Quadruped nominal model and stance geometry.
  double nominalMass = 50.0;  // [kg]
  Eigen::Vector3d nominalInertiaDiag{1.0, 3.0, 3.5};
  double standHeight = 0.5;  // [m]
  double footHalfX = 0.3;    // [m]
  double footHalfY = 0.2;    // [m]

  // Plant truth hidden from the controller.
  double payloadMass = 0.0;  // [kg]
  Eigen::Vector3d payloadCom{0.0, 0.0, 0.0};
  Eigen::Vector3d payloadInertiaDiag{0.0, 0.0, 0.0};  // about payload CoM
  Eigen::Vector3d externalForceWorld{0.0, 0.0, 0.0};  // [N]
  Eigen::Vector3d externalTorqueBase{0.0, 0.0, 0.0};  // [N m]

  // Reference protocol.
  std::string reference = "standing_steps";  // standing_steps | slope_walk | constant
  double stepZ = 0.05;      // [m]
  double stepAngle = 0.15;  // [rad]
  double dwell = 2.0;       // [s]
  double slopeDeg = 0.0;
  double walkSpeed = 0.1;   // [m/s]
  double gaitSwing = 0.3;   // [s] single-foot swing phase
  double gaitStance = 0.1;  // [s] all-stance phase between swings

  // Stage cost and controller gains.
  Eigen::VectorXd qDiag;      // sized per model in applyModelDefaults
  Eigen::VectorXd rDiag;
  double lambdaLin = 5.0;     // [1/s]
  double lambdaRot = 5.0;     // [1/s]
  Eigen::VectorXd kdDiag;
  Eigen::VectorXd gammaDiag;
  Eigen::VectorXd piScale;
  bool freezeTorqueParams = true;
  double barrierMu = 0.1;
  double barrierDelta = 1e-3;
  double frictionMu = 0.7;
  double coneEpsilon = 0.5;   // [N]
  double observerGain = 20.0; // [1/s]
  int sqpIterations = 3;
  double sqpTolerance = 1e-7;

  // Arm-specific knobs.
  double armPayloadMass = 0.5;  // [kg] unknown tip mass
  double armStepAngle = 0.3;    // [rad]

  /// Fills the model-dependent vector defaults that are still empty.
  void applyModelDefaults();
};

struct StepLog {
  double t = 0.0;
  Eigen::VectorXd state;
  Eigen::VectorXd input;
  Eigen::VectorXd sigma;
  Eigen::VectorXd piHat;
  Eigen::VectorXd adaptiveForce;
  double hClf = 0.0;
  double lyapunov = 0.0;
  double epsilon = 0.0;
  double matchResidual = 0.0;
  double linearError = 0.0;
  double angularErrorDeg = 0.0;
  std::uint32_t clampMask = 0;
  int iterations = 0;
  double kktResidual = 0.0;
  double cost = 0.0;
  double maxDefect = 0.0;
  double solveSeconds = 0.0;  // wall clock, excluded from deterministic outputs
};

struct ScenarioResult {
  enum class Verdict { Stable, Diverged, SolverFailed };

  Verdict verdict = Verdict::Stable;
  double failureTime = -1.0;  // negative when no failure
  double linearRmse = 0.0;
  double angularRmseDeg = 0.0;
  std::vector<StepLog> trace;

  bool stable() const { return verdict == Verdict::Stable; }
};

std::string verdictName(ScenarioResult::Verdict verdict);

}  // namespace aclfmpc
