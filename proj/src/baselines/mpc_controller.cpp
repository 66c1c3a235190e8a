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

#include "aclfmpc/baselines/mpc_controller.hpp"

#include <chrono>
#include <cmath>

#include "aclfmpc/math_util.hpp"
#include "aclfmpc/ocp/certainty_equivalence.hpp"
#include "aclfmpc/ocp/dare.hpp"

namespace aclfmpc {
namespace {
// Prediction-side pitch guard: solver iterates may wander past the chart
// boundary even when the plant state is valid.
constexpr double kPitchLimit = M_PI / 2.0 - 2e-3;
}  // namespace

ControllerOptions optionsForVariant(ControllerVariant variant) {
  ControllerOptions o;
  switch (variant) {
    case ControllerVariant::AclfMpc:
      o.clfConstraint = o.adaptation = o.terminalCost = true;
      break;
    case ControllerVariant::AclfMpcNoTerminal:
      o.clfConstraint = o.adaptation = true;
      break;
    case ControllerVariant::ClfMpcNoAdaptation:
      // The stability constraint is this variant's stabilizing device;
      // it carries no terminal value function.
      o.clfConstraint = true;
      break;
    case ControllerVariant::PerfectModelMpc:
      o.perfectModel = o.terminalCost = true;
      break;
    case ControllerVariant::PerfectModelMpcNoTerminal:
      o.perfectModel = true;
      break;
    case ControllerVariant::NominalMpc:
      o.terminalCost = true;
      break;
    case ControllerVariant::MomentumObserverMpc:
      o.momentumObserver = o.terminalCost = true;
      break;
  }
  return o;
}

std::string variantName(ControllerVariant variant) {
  switch (variant) {
    case ControllerVariant::AclfMpc: return "AclfMpc";
    case ControllerVariant::AclfMpcNoTerminal: return "AclfMpcNoTerminal";
    case ControllerVariant::ClfMpcNoAdaptation: return "ClfMpcNoAdaptation";
    case ControllerVariant::PerfectModelMpc: return "PerfectModelMpc";
    case ControllerVariant::PerfectModelMpcNoTerminal:
      return "PerfectModelMpcNoTerminal";
    case ControllerVariant::NominalMpc: return "NominalMpc";
    case ControllerVariant::MomentumObserverMpc: return "MomentumObserverMpc";
  }
  return "unknown";
}

ControllerVariant variantFromName(const std::string& name) {
  for (ControllerVariant v : allVariants()) {
    if (variantName(v) == name) return v;
  }
  throw std::invalid_argument("unknown controller variant: " + name);
}

const std::vector<ControllerVariant>& allVariants() {
  static const std::vector<ControllerVariant> kAll = {
      ControllerVariant::AclfMpc,
      ControllerVariant::AclfMpcNoTerminal,
      ControllerVariant::ClfMpcNoAdaptation,
      ControllerVariant::PerfectModelMpc,
      ControllerVariant::PerfectModelMpcNoTerminal,
      ControllerVariant::NominalMpc,
      ControllerVariant::MomentumObserverMpc,
  };
  return kAll;
}

// ---------------------------------------------------------------------------
// QuadrupedControlSystem

QuadrupedControlSystem::QuadrupedControlSystem(
    SrbParams nominal, std::shared_ptr<const ContactSchedule> schedule,
    std::shared_ptr<const PoseReference> reference, SlidingGains gains,
    FrictionConeConfig cone, std::optional<PlantTruth> truthIfPerfect)
    : nominal_(std::move(nominal)),
      schedule_(std::move(schedule)),
      reference_(std::move(reference)),
      gains_(std::move(gains)),
      cone_(std::move(cone)),
      truth_(std::move(truthIfPerfect)) {}

Eigen::VectorXd QuadrupedControlSystem::chartSafe(const Eigen::VectorXd& x) const {
  if (std::abs(x(4)) <= kPitchLimit) return x;
  Eigen::VectorXd xs = x;
  xs(4) = std::clamp(xs(4), -kPitchLimit, kPitchLimit);
  return xs;
}

Eigen::VectorXd QuadrupedControlSystem::flow(double t, const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& u,
                                             const Eigen::VectorXd& piHat) const {
  const Eigen::VectorXd xs = chartSafe(x);
  const ContactMode& mode = schedule_->modeAt(t);
  if (truth_) {
    PlantTruth plant;
    plant.nominal = makeSrbModel(nominal_, mode);
    plant.payload = truth_->payload;
    plant.externalWrench = truth_->externalWrench;
    const QuadrupedState s = QuadrupedState::unpack(xs);
    const GeneralizedState gs = s.toGeneralized();
    Eigen::VectorXd xdot(12);
    xdot.segment<3>(0) = s.vp;
    xdot.segment<3>(3) = eulerRateMap(s.theta) * s.omega;
    xdot.segment<6>(6) = trueForwardDynamics(plant, gs, u);
    return xdot;
  }
  const SlidingSurfaceState sliding = slidingAt(t, xs);
  return adaptiveSrbFlow(xs, u, piHat, nominal_, mode, sliding.vr, sliding.vrDot);
}

SlidingSurfaceState QuadrupedControlSystem::slidingAt(double t,
                                                      const Eigen::VectorXd& x) const {
  const GeneralizedState gs = QuadrupedState::unpack(chartSafe(x)).toGeneralized();
  return composeSlidingState(gs, reference_->sample(t), gains_);
}

Eigen::MatrixXd QuadrupedControlSystem::regressor(
    const Eigen::VectorXd& x, const SlidingSurfaceState& sliding) const {
  const Eigen::VectorXd xs = chartSafe(x);
  return srbRegressorReference(xs.head<6>(), xs.tail<6>(), sliding.vr,
                               sliding.vrDot);
}

DynamicsTerms QuadrupedControlSystem::nominalTerms(double t,
                                                   const Eigen::VectorXd& x) const {
  const GeneralizedState gs = QuadrupedState::unpack(chartSafe(x)).toGeneralized();
  return makeSrbModel(nominal_, schedule_->modeAt(t))->dynamicsTerms(gs);
}

Eigen::VectorXd QuadrupedControlSystem::stateRef(double t) const {
  const PoseReferenceSample s = reference_->sample(t);
  Eigen::VectorXd x(12);
  x << s.position, eulerZyxFromQuaternion(s.orientation), s.linearVelocity,
      s.angularVelocity;
  return x;
}

Eigen::VectorXd QuadrupedControlSystem::inputRef(double t,
                                                 const Eigen::VectorXd& piHat) const {
  return weightDistributionReference(reference_->sample(t),
                                     schedule_->modeAt(t), nominal_.mass, piHat);
}

Eigen::VectorXd QuadrupedControlSystem::stateInputEquality(
    double t, const Eigen::VectorXd&, const Eigen::VectorXd& u) const {
  return swingForceEquality(u, schedule_->modeAt(t));
}

Eigen::VectorXd QuadrupedControlSystem::inequalities(double t,
                                                     const Eigen::VectorXd& x,
                                                     const Eigen::VectorXd& u) const {
  return frictionConeConstraints(chartSafe(x), u, schedule_->modeAt(t), cone_);
}

std::optional<Eigen::VectorXd> QuadrupedControlSystem::trueParametersIfKnown() const {
  if (!truth_) return std::nullopt;
  return truth_->trueParameters();
}

// ---------------------------------------------------------------------------
// ArmControlSystem

ArmControlSystem::ArmControlSystem(std::shared_ptr<const PlanarArmModel> nominal,
                                   std::shared_ptr<const JointReference> reference,
                                   SlidingGains gains,
                                   std::optional<PlantTruth> truthIfPerfect)
    : nominal_(std::move(nominal)),
      reference_(std::move(reference)),
      gains_(std::move(gains)),
      truth_(std::move(truthIfPerfect)) {}

Eigen::VectorXd ArmControlSystem::flow(double t, const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& piHat) const {
  GeneralizedState gs{x.head<2>(), x.tail<2>()};
  Eigen::VectorXd xdot(4);
  xdot.head<2>() = gs.v;
  if (truth_) {
    xdot.tail<2>() = trueForwardDynamics(*truth_, gs, u);
    return xdot;
  }
  const SlidingSurfaceState sliding = slidingAt(t, x);
  const DynamicsTerms terms = nominal_->dynamicsTerms(gs);
  const Eigen::VectorXd yuPi =
      nominal_->regressorReference(gs, sliding.vr, sliding.vrDot) * piHat;
  xdot.tail<2>() = terms.M.ldlt().solve(terms.S * u - terms.C * gs.v - terms.g - yuPi);
  return xdot;
}

SlidingSurfaceState ArmControlSystem::slidingAt(double t,
                                                const Eigen::VectorXd& x) const {
  const JointReferenceSample s = reference_->sample(t);
  GeneralizedState gs{x.head<2>(), x.tail<2>()};
  return composeSlidingStateJoint(gs, s.position, s.velocity, s.acceleration,
                                  gains_);
}

Eigen::MatrixXd ArmControlSystem::regressor(const Eigen::VectorXd& x,
                                            const SlidingSurfaceState& sliding) const {
  GeneralizedState gs{x.head<2>(), x.tail<2>()};
  return nominal_->regressorReference(gs, sliding.vr, sliding.vrDot);
}

DynamicsTerms ArmControlSystem::nominalTerms(double, const Eigen::VectorXd& x) const {
  GeneralizedState gs{x.head<2>(), x.tail<2>()};
  return nominal_->dynamicsTerms(gs);
}

Eigen::VectorXd ArmControlSystem::stateRef(double t) const {
  const JointReferenceSample s = reference_->sample(t);
  Eigen::VectorXd x(4);
  x << s.position, s.velocity;
  return x;
}

Eigen::VectorXd ArmControlSystem::inputRef(double t,
                                           const Eigen::VectorXd& piHat) const {
  // Inverse dynamics along the reference plus the adaptive feedforward.
  const JointReferenceSample s = reference_->sample(t);
  GeneralizedState gs{s.position, s.velocity};
  const DynamicsTerms terms = nominal_->dynamicsTerms(gs);
  const Eigen::VectorXd yuPi =
      nominal_->regressorReference(gs, s.velocity, s.acceleration) * piHat;
  return terms.M * s.acceleration + terms.C * s.velocity + terms.g + yuPi;
}

Eigen::VectorXd ArmControlSystem::stateInputEquality(double, const Eigen::VectorXd&,
                                                     const Eigen::VectorXd&) const {
  return Eigen::VectorXd();
}

Eigen::VectorXd ArmControlSystem::inequalities(double, const Eigen::VectorXd&,
                                               const Eigen::VectorXd&) const {
  return Eigen::VectorXd();
}

std::optional<Eigen::VectorXd> ArmControlSystem::trueParametersIfKnown() const {
  if (!truth_) return std::nullopt;
  return truth_->trueParameters();
}

// ---------------------------------------------------------------------------
// MpcController

MpcController::MpcController(std::shared_ptr<const ControlledSystem> system,
                             ControllerOptions options, MpcConfig config)
    : system_(std::move(system)),
      options_(options),
      config_(std::move(config)),
      estimate_(AdaptiveEstimate::zero(config_.gamma, config_.piScale)),
      observer_(MomentumObserverState::make(
          config_.observerGain.size() > 0
              ? config_.observerGain
              : Eigen::MatrixXd(20.0 * Eigen::MatrixXd::Identity(
                                    system_->nx() / 2, system_->nx() / 2)),
          system_->nx() / 2)),
      lastInput_(Eigen::VectorXd::Zero(system_->nu())) {
  if (options_.momentumObserver &&
      system_->np() < system_->nx() / 2 + 10) {
    throw std::invalid_argument(
        "momentum-observer compensation needs a full wrench parameter block");
  }
}

OcpDefinition MpcController::buildOcp(double t, const Eigen::VectorXd& piDynamics,
                                      const Eigen::VectorXd& piReference) const {
  OcpDefinition ocp;
  ocp.nx = system_->nx();
  ocp.nu = system_->nu();
  ocp.horizon = config_.horizon;
  ocp.nodeCount = config_.nodes;
  ocp.startTime = t;
  ocp.Q = config_.Q;
  ocp.R = config_.R;
  ocp.barrier = config_.barrier;

  auto sys = system_;
  ocp.flow = [sys, piDynamics](double tt, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u) {
    return sys->flow(tt, x, u, piDynamics);
  };
  ocp.stateRef = [sys](double tt) { return sys->stateRef(tt); };
  ocp.inputRef = [sys, piReference](double tt) {
    return sys->inputRef(tt, piReference);
  };
  ocp.stateInputEquality = [sys](double tt, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& u) {
    return sys->stateInputEquality(tt, x, u);
  };

  const bool withClf = options_.clfConstraint;
  const Eigen::MatrixXd kd = config_.sliding.Kd;
  ocp.inequality = [sys, piDynamics, withClf, kd](double tt,
                                                  const Eigen::VectorXd& x,
                                                  const Eigen::VectorXd& u) {
    const Eigen::VectorXd base = sys->inequalities(tt, x, u);
    if (!withClf) return base;
    const SlidingSurfaceState sliding = sys->slidingAt(tt, x);
    const double hClf =
        clfConstraintValue(sliding, sys->nominalTerms(tt, x), u,
                           sys->regressor(x, sliding) * piDynamics, kd);
    Eigen::VectorXd out(base.size() + 1);
    out << base, hClf;
    return out;
  };

  if (options_.terminalCost && terminal_) {
    ocp.terminal = TerminalCost{terminal_->P, sys->stateRef(t + config_.horizon)};
  }
  return ocp;
}

void MpcController::synthesizeTerminal(double t0) {
  // Linearize the variant's own prediction model (initial estimates are
  // zero; the perfect-model flow carries the truth by itself).
  const int nx = system_->nx();
  const Eigen::VectorXd piEq = Eigen::VectorXd::Zero(system_->np());
  Eigen::VectorXd xEq = system_->stateRef(t0);
  xEq.tail(nx / 2).setZero();

  auto sys = system_;
  auto flowFn = [sys, piEq, t0](double, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& u) {
    return sys->flow(t0, x, u, piEq);
  };

  // The flow is affine in u; one least-squares solve lands on the exact
  // equilibrium input.
  const Eigen::VectorXd u0 = system_->inputRef(t0, piEq);
  const Eigen::VectorXd f0 = flowFn(t0, xEq, u0);
  const Eigen::MatrixXd b = fdJacobian(
      [&](const Eigen::VectorXd& u) { return flowFn(t0, xEq, u); }, u0);
  const Eigen::VectorXd uEq =
      u0 + Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(b).solve(-f0);

  terminal_ = lqrTerminalCost(flowFn, config_.Q, config_.R, xEq, uEq,
                              config_.horizon / (config_.nodes - 1));
  terminalReady_ = true;
}

MpcController::StepResult MpcController::step(double t,
                                              const Eigen::VectorXd& xMeasured) {
  StepResult out;
  const int n = system_->nx() / 2;
  out.sliding = system_->slidingAt(t, xMeasured);
  const Eigen::MatrixXd yu = system_->regressor(xMeasured, out.sliding);

  if (options_.adaptation) {
    const EstimateUpdate update =
        updateEstimate(estimate_, out.sliding, yu, config_.controlPeriod);
    estimate_ = update.next;
    out.clampMask = update.clampMask;
  }

  const DynamicsTerms measuredTerms = system_->nominalTerms(t, xMeasured);
  if (options_.momentumObserver) {
    observer_ = momentumObserverStep(observer_, measuredTerms,
                                     xMeasured.tail(n), lastInput_,
                                     config_.controlPeriod);
    out.observerWrench = observer_.wrenchEstimate;
  }

  // Parameters fed to the prediction model, and separately to the input
  // reference: the weight-distribution anchor moves with each variant's
  // own model knowledge. Adaptive controllers feed their estimate, the
  // perfect-model baselines their known mismatch; the momentum observer
  // compensates in the dynamics only, so its anchor stays nominal, which
  // is exactly the structural weakness probed on the slope.
  Eigen::VectorXd piDyn = Eigen::VectorXd::Zero(system_->np());
  if (options_.adaptation) piDyn = estimate_.piHat;
  if (options_.momentumObserver) piDyn.tail(n) = -observer_.wrenchEstimate;
  Eigen::VectorXd piRef = options_.adaptation
                              ? piDyn
                              : Eigen::VectorXd(Eigen::VectorXd::Zero(system_->np()));
  if (options_.perfectModel && system_->trueParametersIfKnown()) {
    piRef = *system_->trueParametersIfKnown();
  }

  if (options_.terminalCost && !terminalReady_) synthesizeTerminal(t);

  const auto tic = std::chrono::steady_clock::now();
  const OcpDefinition ocp = buildOcp(t, piDyn, piRef);
  TranscribedNlp nlp(ocp, xMeasured);
  const Eigen::VectorXd guess =
      previous_ ? nlp.shiftedGuess(*previous_) : nlp.initialGuess();
  SqpSettings settings;
  settings.maxIterations = config_.sqpIterationsPerStep;
  settings.tolerance = config_.sqpTolerance;
  const SolverResult res = solveSqp(nlp, guess, settings);
  out.solveSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - tic)
          .count();

  out.solverOk = res.decision.allFinite() && std::isfinite(res.cost);
  if (out.solverOk) {
    previous_ = res;
    lastInput_ = res.inputs.front();
  } else {
    previous_.reset();
  }
  out.input = lastInput_;
  out.iterations = res.iterations;
  out.kktResidual = res.kktResidual;
  out.cost = res.cost;
  out.maxDefect = res.maxDefect;

  // Step diagnostics at the measured state and applied input.
  out.piHat = estimate_.piHat;
  out.adaptiveForce = yu * piDyn;
  out.hClf = clfConstraintValue(out.sliding, measuredTerms, out.input,
                                out.adaptiveForce, config_.sliding.Kd);
  const CertaintySplit split =
      trySplitCertaintyEquivalence(out.input, yu, piDyn, measuredTerms.S);
  out.auxiliaryInput = split.auxiliaryInput;
  out.matchResidual = split.residual;
  const Eigen::VectorXd ynPin = measuredTerms.M * out.sliding.vrDot +
                                measuredTerms.C * out.sliding.vr +
                                measuredTerms.g;
  out.epsilon = (measuredTerms.S * split.auxiliaryInput - ynPin).norm();
  return out;
}

// ---------------------------------------------------------------------------
// Factories

std::unique_ptr<MpcController> makeQuadrupedController(
    ControllerVariant variant, const MpcConfig& config, SrbParams nominal,
    std::shared_ptr<const ContactSchedule> schedule,
    std::shared_ptr<const PoseReference> reference, FrictionConeConfig cone,
    const PlantTruth* truthIfPerfect) {
  const ControllerOptions options = optionsForVariant(variant);
  std::optional<PlantTruth> truth;
  if (options.perfectModel) {
    if (truthIfPerfect == nullptr) {
      throw std::invalid_argument(
          "perfect-model variant requested without plant truth");
    }
    truth = *truthIfPerfect;
  }
  auto system = std::make_shared<QuadrupedControlSystem>(
      std::move(nominal), std::move(schedule), std::move(reference),
      config.sliding, cone, std::move(truth));
  return std::make_unique<MpcController>(system, options, config);
}

std::unique_ptr<MpcController> makeArmController(
    ControllerVariant variant, const MpcConfig& config,
    std::shared_ptr<const PlanarArmModel> nominal,
    std::shared_ptr<const JointReference> reference,
    const PlantTruth* truthIfPerfect) {
  const ControllerOptions options = optionsForVariant(variant);
  if (options.momentumObserver) {
    throw std::invalid_argument(
        "momentum-observer variant is not defined for the arm");
  }
  std::optional<PlantTruth> truth;
  if (options.perfectModel) {
    if (truthIfPerfect == nullptr) {
      throw std::invalid_argument(
          "perfect-model variant requested without plant truth");
    }
    truth = *truthIfPerfect;
  }
  auto system = std::make_shared<ArmControlSystem>(
      std::move(nominal), std::move(reference), config.sliding, std::move(truth));
  return std::make_unique<MpcController>(system, options, config);
}

}  // namespace aclfmpc
