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

#include <memory>
#include <optional>

#include "aclfmpc/baselines/momentum_observer.hpp"
#include "aclfmpc/baselines/variants.hpp"
#include "aclfmpc/clf/adaptive_estimate.hpp"
#include "aclfmpc/mechanics/planar_arm.hpp"
#include "aclfmpc/mechanics/plant_truth.hpp"
#include "aclfmpc/ocp/sqp_solver.hpp"
#include "aclfmpc/quadruped/quadruped_model.hpp"
#include "aclfmpc/simlab/reference.hpp"

namespace aclfmpc {

/// Controller-side view of the plant: the prediction model, error
/// geometry and constraint sets a variant plans with. Implementations are
/// immutable; the perfect-model view is the only one holding plant truth.
class ControlledSystem {
 public:
  virtual ~ControlledSystem() = default;
  virtual int nx() const = 0;
  virtual int nu() const = 0;
  virtual int np() const = 0;

  virtual Eigen::VectorXd flow(double t, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u,
                               const Eigen::VectorXd& piHat) const = 0;
  virtual SlidingSurfaceState slidingAt(double t,
                                        const Eigen::VectorXd& x) const = 0;
  virtual Eigen::MatrixXd regressor(const Eigen::VectorXd& x,
                                    const SlidingSurfaceState& sliding) const = 0;
  virtual DynamicsTerms nominalTerms(double t, const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd stateRef(double t) const = 0;
  virtual Eigen::VectorXd inputRef(double t, const Eigen::VectorXd& piHat) const = 0;
  /// Hard state-input equalities (may be empty).
  virtual Eigen::VectorXd stateInputEquality(double t, const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& u) const = 0;
  /// Inequalities other than the stability constraint (may be empty).
  virtual Eigen::VectorXd inequalities(double t, const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& u) const = 0;
  /// Set only on perfect-model views.
  virtual std::optional<Eigen::VectorXd> trueParametersIfKnown() const {
    return std::nullopt;
  }
};

/// Quadruped single-rigid-body view. Without truth the prediction is
/// the nominal flow plus the adaptive wrench; with truth (perfect-model
/// variants only) the prediction is the true combined dynamics.
class QuadrupedControlSystem final : public ControlledSystem {
 public:
  QuadrupedControlSystem(SrbParams nominal,
                         std::shared_ptr<const ContactSchedule> schedule,
                         std::shared_ptr<const PoseReference> reference,
                         SlidingGains gains, FrictionConeConfig cone,
                         std::optional<PlantTruth> truthIfPerfect);

  int nx() const override { return 12; }
  int nu() const override { return 12; }
  int np() const override { return SingleRigidBodyModel::kParamDim; }

  Eigen::VectorXd flow(double t, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& u,
                       const Eigen::VectorXd& piHat) const override;
  SlidingSurfaceState slidingAt(double t, const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd regressor(const Eigen::VectorXd& x,
                            const SlidingSurfaceState& sliding) const override;
  DynamicsTerms nominalTerms(double t, const Eigen::VectorXd& x) const override;
  Eigen::VectorXd stateRef(double t) const override;
  Eigen::VectorXd inputRef(double t, const Eigen::VectorXd& piHat) const override;
  Eigen::VectorXd stateInputEquality(double t, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& u) const override;
  Eigen::VectorXd inequalities(double t, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u) const override;
  std::optional<Eigen::VectorXd> trueParametersIfKnown() const override;

  const SrbParams& nominal() const { return nominal_; }
  const ContactSchedule& schedule() const { return *schedule_; }

 private:
  Eigen::VectorXd chartSafe(const Eigen::VectorXd& x) const;

  SrbParams nominal_;
  std::shared_ptr<const ContactSchedule> schedule_;
  std::shared_ptr<const PoseReference> reference_;
  SlidingGains gains_;
  FrictionConeConfig cone_;
  std::optional<PlantTruth> truth_;
};

/// Planar-arm view (fully actuated, unknown tip mass).
class ArmControlSystem final : public ControlledSystem {
 public:
  ArmControlSystem(std::shared_ptr<const PlanarArmModel> nominal,
                   std::shared_ptr<const JointReference> reference,
                   SlidingGains gains, std::optional<PlantTruth> truthIfPerfect);

  int nx() const override { return 4; }
  int nu() const override { return 2; }
  int np() const override { return 1; }

  Eigen::VectorXd flow(double t, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& u,
                       const Eigen::VectorXd& piHat) const override;
  SlidingSurfaceState slidingAt(double t, const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd regressor(const Eigen::VectorXd& x,
                            const SlidingSurfaceState& sliding) const override;
  DynamicsTerms nominalTerms(double t, const Eigen::VectorXd& x) const override;
  Eigen::VectorXd stateRef(double t) const override;
  Eigen::VectorXd inputRef(double t, const Eigen::VectorXd& piHat) const override;
  Eigen::VectorXd stateInputEquality(double t, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& u) const override;
  Eigen::VectorXd inequalities(double t, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u) const override;
  std::optional<Eigen::VectorXd> trueParametersIfKnown() const override;

 private:
  std::shared_ptr<const PlanarArmModel> nominal_;
  std::shared_ptr<const JointReference> reference_;
  SlidingGains gains_;
  std::optional<PlantTruth> truth_;
};

/// Everything a controller needs besides the system view.
struct MpcConfig {
  double horizon = 1.0;
  int nodes = 21;
  double controlPeriod = 0.01;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;
  SlidingGains sliding;
  RelaxedBarrierConfig barrier;
  Eigen::MatrixXd gamma;         // adaptation gain, np x np
  Eigen::VectorXd piScale;       // projection-box scales, np
  Eigen::MatrixXd observerGain;  // momentum-observer gain (n x n)
  int sqpIterationsPerStep = 3;  // real-time iteration budget per period
  double sqpTolerance = 1e-7;
};

/// Receding-horizon controller implementing the selected variant.
class MpcController {
 public:
  MpcController(std::shared_ptr<const ControlledSystem> system,
                ControllerOptions options, MpcConfig config);

  struct StepResult {
    Eigen::VectorXd input;
    SlidingSurfaceState sliding;    // at the measured state
    Eigen::VectorXd piHat;          // estimate after this step's update
    Eigen::VectorXd adaptiveForce;  // Yu piHat at the measured state
    double hClf = 0.0;              // at measured state and applied input
    Eigen::VectorXd auxiliaryInput;
    double matchResidual = 0.0;     // || S w - (S tau - Yu piHat) ||
    double epsilon = 0.0;           // || S w - Yn pin ||
    std::uint32_t clampMask = 0;
    int iterations = 0;
    double kktResidual = 0.0;
    double cost = 0.0;
    double maxDefect = 0.0;
    bool solverOk = true;
    Eigen::VectorXd observerWrench;
    double solveSeconds = 0.0;      // wall clock; excluded from deterministic logs
  };

  StepResult step(double t, const Eigen::VectorXd& xMeasured);

  const AdaptiveEstimate& estimate() const { return estimate_; }
  const ControllerOptions& options() const { return options_; }
  const MpcConfig& config() const { return config_; }

 private:
  OcpDefinition buildOcp(double t, const Eigen::VectorXd& piDynamics,
                         const Eigen::VectorXd& piReference) const;
  void synthesizeTerminal(double t0);

  std::shared_ptr<const ControlledSystem> system_;
  ControllerOptions options_;
  MpcConfig config_;
  AdaptiveEstimate estimate_;
  MomentumObserverState observer_;
  std::optional<TerminalCost> terminal_;
  std::optional<SolverResult> previous_;
  Eigen::VectorXd lastInput_;
  bool terminalReady_ = false;
};

/// Assembles the controller for a variant. Plant truth must be provided
/// exactly for the perfect-model variants and is structurally unavailable
/// to all others. Throws std::invalid_argument when a perfect-model
/// variant is requested without truth.
std::unique_ptr<MpcController> makeQuadrupedController(
    ControllerVariant variant, const MpcConfig& config, SrbParams nominal,
    std::shared_ptr<const ContactSchedule> schedule,
    std::shared_ptr<const PoseReference> reference, FrictionConeConfig cone,
    const PlantTruth* truthIfPerfect);

std::unique_ptr<MpcController> makeArmController(
    ControllerVariant variant, const MpcConfig& config,
    std::shared_ptr<const PlanarArmModel> nominal,
    std::shared_ptr<const JointReference> reference,
    const PlantTruth* truthIfPerfect);

}  // namespace aclfmpc
