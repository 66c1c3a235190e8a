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

#include "aclfmpc/simlab/runner.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "aclfmpc/math_util.hpp"

namespace aclfmpc {
namespace {

Eigen::VectorXd constantVector(double value, int n) {
  return Eigen::VectorXd::Constant(n, value);
}

// Footfall layout: LF, RF, LH, RH.
constexpr int kSwingOrder[kNumFeet] = {0, 3, 1, 2};

std::array<Eigen::Vector2d, kNumFeet> footOffsets(const Scenario& sc) {
  return {Eigen::Vector2d(sc.footHalfX, sc.footHalfY),
          Eigen::Vector2d(sc.footHalfX, -sc.footHalfY),
          Eigen::Vector2d(-sc.footHalfX, sc.footHalfY),
          Eigen::Vector2d(-sc.footHalfX, -sc.footHalfY)};
}

std::shared_ptr<ContactSchedule> makeStandingSchedule(const Scenario& sc) {
  ContactMode mode;
  mode.duration = sc.duration + 2.0 * sc.horizon + 1.0;
  const auto offsets = footOffsets(sc);
  for (int i = 0; i < kNumFeet; ++i) {
    mode.inContact[i] = true;
    mode.footPositionWorld[i] =
        Eigen::Vector3d(offsets[i].x(), offsets[i].y(), 0.0);
  }
  return std::make_shared<ContactSchedule>(std::vector<ContactMode>{mode},
                                           false);
}

// Statically stable crawl on the slope plane z = tan(alpha) x: one swing
// foot at a time with all-stance phases in between, footholds advancing
// along the incline with the commanded speed.
std::shared_ptr<ContactSchedule> makeCrawlSchedule(const Scenario& sc,
                                                   double slopeAngle) {
  const Eigen::Vector3d d(std::cos(slopeAngle), 0.0, std::sin(slopeAngle));
  const auto offsets = footOffsets(sc);
  const double cycle = kNumFeet * (sc.gaitSwing + sc.gaitStance);
  const double stride = sc.walkSpeed * cycle;
  const double horizonPad = 2.0 * sc.horizon + 1.0;

  std::array<double, kNumFeet> arc{};  // along-slope position per foot
  for (int i = 0; i < kNumFeet; ++i) arc[i] = offsets[i].x();

  auto footWorld = [&](int i) {
    return Eigen::Vector3d(arc[i] * d + Eigen::Vector3d(0.0, offsets[i].y(), 0.0));
  };
  auto stamp = [&](const std::array<bool, kNumFeet>& contact, double duration) {
    ContactMode m;
    m.duration = duration;
    m.inContact = contact;
    for (int i = 0; i < kNumFeet; ++i) m.footPositionWorld[i] = footWorld(i);
    return m;
  };

  std::vector<ContactMode> modes;
  std::array<bool, kNumFeet> allStance{true, true, true, true};
  const double startDelay = 1.0;  // matches SlopeWalkConfig::startDelay
  modes.push_back(stamp(allStance, startDelay));
  double t = startDelay;

  const double total = sc.duration + horizonPad;
  while (t < total) {
    for (int leg = 0; leg < kNumFeet && t < total; ++leg) {
      const int foot = kSwingOrder[leg];
      std::array<bool, kNumFeet> swing = allStance;
      swing[foot] = false;
      modes.push_back(stamp(swing, sc.gaitSwing));
      t += sc.gaitSwing;
      // Touchdown half a stride ahead of the nominal offset so the foot
      // leads, then trails symmetrically until its next swing.
      arc[foot] = sc.walkSpeed * std::max(t - startDelay, 0.0) +
                  offsets[foot].x() + 0.5 * stride;
      modes.push_back(stamp(allStance, sc.gaitStance));
      t += sc.gaitStance;
    }
  }
  modes.push_back(stamp(allStance, horizonPad));
  return std::make_shared<ContactSchedule>(std::move(modes), false);
}

MpcConfig makeMpcConfig(const Scenario& sc, int nx, int nu, int np) {
  MpcConfig mpc;
  mpc.horizon = sc.horizon;
  mpc.nodes = sc.nodes;
  mpc.controlPeriod = sc.controlPeriod;
  mpc.Q = sc.qDiag.asDiagonal();
  mpc.R = sc.rDiag.asDiagonal();
  mpc.barrier = {sc.barrierMu, sc.barrierDelta};
  mpc.sqpIterationsPerStep = sc.sqpIterations;
  mpc.sqpTolerance = sc.sqpTolerance;
  mpc.observerGain = sc.observerGain *
                     Eigen::MatrixXd::Identity(nx / 2, nx / 2);

  const int n = nx / 2;
  mpc.sliding.Kd = sc.kdDiag.asDiagonal();
  if (n == 6) {
    mpc.sliding.lambdaLin = sc.lambdaLin * Eigen::Matrix3d::Identity();
    mpc.sliding.lambdaRot = sc.lambdaRot * Eigen::Matrix3d::Identity();
  } else {
    mpc.sliding.lambdaLin = sc.lambdaLin * Eigen::MatrixXd::Identity(n, n);
  }

  Eigen::VectorXd gammaDiag = sc.gammaDiag;
  Eigen::VectorXd piScale = sc.piScale;
  if (np == SingleRigidBodyModel::kParamDim && sc.freezeTorqueParams) {
    gammaDiag.tail<3>().setZero();
    piScale.tail<3>().setZero();
  }
  mpc.gamma = gammaDiag.asDiagonal();
  mpc.piScale = piScale;
  (void)nu;
  return mpc;
}

double errorAngleDeg(const Eigen::Quaterniond& actual,
                     const Eigen::Quaterniond& desired) {
  const Eigen::Quaterniond e = desired.conjugate() * actual;
  const double angle = 2.0 * std::atan2(e.vec().norm(), std::abs(e.w()));
  return angle * 180.0 / M_PI;
}

// Lyapunov diagnostic restricted to the adapted parameter subspace.
double lyapunovDiagnostic(const SlidingSurfaceState& sliding,
                          const Eigen::MatrixXd& combinedM,
                          const Eigen::VectorXd& piHat,
                          const Eigen::VectorXd& piTrue,
                          const Eigen::MatrixXd& gamma) {
  std::vector<int> adapted;
  for (int i = 0; i < gamma.rows(); ++i) {
    if (gamma(i, i) > 0.0) adapted.push_back(i);
  }
  const int na = static_cast<int>(adapted.size());
  Eigen::VectorXd piTilde(na);
  Eigen::MatrixXd gammaSub(na, na);
  for (int i = 0; i < na; ++i) {
    piTilde(i) = piHat(adapted[i]) - piTrue(adapted[i]);
    for (int j = 0; j < na; ++j) gammaSub(i, j) = gamma(adapted[i], adapted[j]);
  }
  SlidingSurfaceState s = sliding;
  return lyapunovValue(s, combinedM, piTilde, gammaSub);
}

}  // namespace

void Scenario::applyModelDefaults() {
  const bool quad = (model == "quadruped");
  const int nx = quad ? 12 : 4;
  const int nu = quad ? 12 : 2;
  const int n = nx / 2;
  if (qDiag.size() == 0) {
    if (quad) {
      qDiag.resize(12);
      qDiag << 800, 800, 800, 600, 600, 600, 30, 30, 30, 15, 15, 15;
    } else {
      qDiag.resize(4);
      qDiag << 200, 200, 20, 20;
    }
  }
  if (rDiag.size() == 0) rDiag = constantVector(quad ? 2e-2 : 1e-2, nu);
  if (kdDiag.size() == 0) {
    if (quad) {
      kdDiag.resize(6);
      kdDiag << 50, 50, 50, 80, 80, 80;
    } else {
      kdDiag = constantVector(20.0, n);
    }
  }
  if (gammaDiag.size() == 0) {
    if (quad) {
      gammaDiag.resize(16);
      // Mass/CoM/inertia gains shaped like the hardware tuning, scaled
      // down enough that the estimate settles without ringing at this
      // plant scale; force/torque gains sized for ~100 N disturbances.
      gammaDiag << 2.5, 0.5, 0.5, 0.5, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01,
          20.0, 20.0, 20.0, 5.0, 5.0, 5.0;
    } else {
      gammaDiag = constantVector(0.5, 1);
    }
  }
  if (piScale.size() == 0) {
    if (quad) {
      piScale.resize(16);
      piScale << 10, 3, 3, 3, 1, 1, 1, 1, 1, 1, 100, 100, 100, 20, 20, 20;
    } else {
      piScale = constantVector(2.0, 1);
    }
  }
}

std::string verdictName(ScenarioResult::Verdict verdict) {
  switch (verdict) {
    case ScenarioResult::Verdict::Stable: return "stable";
    case ScenarioResult::Verdict::Diverged: return "diverged";
    case ScenarioResult::Verdict::SolverFailed: return "solver-failed";
  }
  return "unknown";
}

QuadrupedSetup buildQuadrupedSetup(const Scenario& scenarioIn) {
  Scenario sc = scenarioIn;
  sc.applyModelDefaults();

  QuadrupedSetup setup;
  setup.nominal.mass = sc.nominalMass;
  setup.nominal.inertia = sc.nominalInertiaDiag.asDiagonal();

  const double slope = sc.slopeDeg * M_PI / 180.0;
  const bool walk = (sc.reference == "slope_walk");
  if (walk) {
    setup.schedule = makeCrawlSchedule(sc, slope);
    SlopeWalkConfig cfg;
    cfg.slopeAngle = slope;
    cfg.speed = sc.walkSpeed;
    cfg.startPosition =
        sc.standHeight * Eigen::Vector3d(-std::sin(slope), 0.0, std::cos(slope));
    setup.reference = std::make_shared<SlopeWalkReference>(cfg);
    setup.cone.surfaceNormal = Eigen::Vector3d(-std::sin(slope), 0.0, std::cos(slope));
  } else {
    setup.schedule = makeStandingSchedule(sc);
    StandingStepConfig cfg;
    cfg.basePosition = Eigen::Vector3d(0.0, 0.0, sc.standHeight);
    cfg.zStep = sc.stepZ;
    cfg.angleStep = sc.stepAngle;
    cfg.dwell = sc.dwell;
    if (sc.reference == "constant") {
      cfg.zStep = 0.0;
      cfg.angleStep = 0.0;
    }
    setup.reference = std::make_shared<StandingStepReference>(cfg);
    setup.cone.surfaceNormal = Eigen::Vector3d::UnitZ();
  }
  setup.cone.mu = sc.frictionMu;
  setup.cone.epsilon = sc.coneEpsilon;

  setup.truth.payload.pi = rigidPayloadParameters(
      sc.payloadMass, sc.payloadCom,
      sc.payloadInertiaDiag.asDiagonal().toDenseMatrix());
  setup.truth.externalWrench.resize(6);
  setup.truth.externalWrench << sc.externalForceWorld, sc.externalTorqueBase;
  setup.truth.nominal = makeSrbModel(setup.nominal, setup.schedule->modeAt(0.0));

  setup.mpc = makeMpcConfig(sc, 12, 12, SingleRigidBodyModel::kParamDim);

  const PoseReferenceSample s0 = setup.reference->sample(0.0);
  QuadrupedState x0;
  x0.p = s0.position;
  x0.theta = eulerZyxFromQuaternion(s0.orientation);
  std::mt19937 gen(sc.seed);
  std::uniform_real_distribution<double> jitter(-1e-3, 1e-3);
  for (int i = 0; i < 3; ++i) x0.p(i) += jitter(gen);
  setup.initialState = x0.pack();
  return setup;
}

ArmSetup buildArmSetup(const Scenario& scenarioIn) {
  Scenario sc = scenarioIn;
  sc.applyModelDefaults();

  ArmSetup setup;
  setup.nominal = std::make_shared<PlanarArmModel>(1.0, 1.0, 1.0, 1.0);
  Eigen::VectorXd poseA(2), poseB(2);
  poseA << 0.4, 0.8;
  poseB << 0.4 + sc.armStepAngle, 0.8 - sc.armStepAngle;
  setup.reference = std::make_shared<StepJointReference>(poseA, poseB, sc.dwell);

  setup.truth.nominal = setup.nominal;
  setup.truth.payload.pi = constantVector(sc.armPayloadMass, 1);
  setup.truth.externalWrench = Eigen::VectorXd::Zero(2);

  setup.mpc = makeMpcConfig(sc, 4, 2, 1);

  std::mt19937 gen(sc.seed);
  std::uniform_real_distribution<double> jitter(-1e-3, 1e-3);
  Eigen::VectorXd x0(4);
  x0 << poseA(0) + jitter(gen), poseA(1) + jitter(gen), 0.0, 0.0;
  setup.initialState = x0;
  return setup;
}

namespace {

ScenarioResult runQuadruped(const Scenario& sc) {
  QuadrupedSetup setup = buildQuadrupedSetup(sc);
  const PlantTruth& truth = setup.truth;

  auto controller = makeQuadrupedController(
      sc.variant, setup.mpc, setup.nominal, setup.schedule, setup.reference,
      setup.cone, &truth);

  auto plantFlow = [&](double t, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& u) {
    const ContactMode& mode = setup.schedule->modeAt(t);
    PlantTruth pt = truth;
    pt.nominal = makeSrbModel(setup.nominal, mode);
    const QuadrupedState s = QuadrupedState::unpack(x);
    if (!chartValid(s.theta)) {
      throw ChartSingularityError("plant left the orientation chart");
    }
    Eigen::VectorXd xdot(12);
    xdot.segment<3>(0) = s.vp;
    xdot.segment<3>(3) = eulerRateMap(s.theta) * s.omega;
    xdot.segment<6>(6) = trueForwardDynamics(pt, s.toGeneralized(), u);
    return xdot;
  };

  ScenarioResult result;
  Eigen::VectorXd x = setup.initialState;
  const int steps = static_cast<int>(std::round(sc.duration / sc.controlPeriod));
  const double hSub = sc.controlPeriod / sc.plantSubsteps;
  result.trace.reserve(steps);

  for (int k = 0; k < steps; ++k) {
    const double t = k * sc.controlPeriod;
    const QuadrupedState qs = QuadrupedState::unpack(x);
    const PoseReferenceSample ref = setup.reference->sample(t);
    const double linErr = (ref.position - qs.p).norm();
    if (linErr > 1.0 || !chartValid(qs.theta)) {
      result.verdict = ScenarioResult::Verdict::Diverged;
      result.failureTime = t;
      break;
    }

    MpcController::StepResult sr;
    try {
      sr = controller->step(t, x);
    } catch (const std::exception&) {
      result.verdict = ScenarioResult::Verdict::SolverFailed;
      result.failureTime = t;
      break;
    }
    if (!sr.solverOk || !sr.input.allFinite()) {
      result.verdict = ScenarioResult::Verdict::SolverFailed;
      result.failureTime = t;
      break;
    }

    StepLog log;
    log.t = t;
    log.state = x;
    log.input = sr.input;
    log.sigma = sr.sliding.sigma;
    log.piHat = sr.piHat;
    log.adaptiveForce = sr.adaptiveForce;
    log.hClf = sr.hClf;
    log.epsilon = sr.epsilon;
    log.matchResidual = sr.matchResidual;
    log.clampMask = sr.clampMask;
    log.iterations = sr.iterations;
    log.kktResidual = sr.kktResidual;
    log.cost = sr.cost;
    log.maxDefect = sr.maxDefect;
    log.solveSeconds = sr.solveSeconds;
    log.linearError = linErr;
    log.angularErrorDeg = errorAngleDeg(quaternionZyx(qs.theta), ref.orientation);

    const ContactMode& mode = setup.schedule->modeAt(t);
    const DynamicsTerms nomTerms =
        makeSrbModel(setup.nominal, mode)->dynamicsTerms(qs.toGeneralized());
    const DynamicsTerms payTerms = makeSrbModel(setup.nominal, mode)
                                       ->payloadTerms(qs.toGeneralized(),
                                                      truth.payload);
    log.lyapunov = lyapunovDiagnostic(sr.sliding, nomTerms.M + payTerms.M,
                                      sr.piHat, truth.trueParameters(),
                                      controller->estimate().gamma);
    result.trace.push_back(std::move(log));

    try {
      for (int s = 0; s < sc.plantSubsteps; ++s) {
        x = rk4Step([&](double tt, const Eigen::VectorXd& xs) {
          return plantFlow(tt, xs, sr.input);
        }, t + s * hSub, x, hSub);
      }
    } catch (const std::exception&) {
      result.verdict = ScenarioResult::Verdict::Diverged;
      result.failureTime = t;
      break;
    }
    if (!x.allFinite()) {
      result.verdict = ScenarioResult::Verdict::Diverged;
      result.failureTime = t;
      break;
    }
  }

  std::tie(result.linearRmse, result.angularRmseDeg) = computeRmse(result.trace);
  return result;
}

ScenarioResult runArm(const Scenario& sc) {
  ArmSetup setup = buildArmSetup(sc);
  auto controller = makeArmController(sc.variant, setup.mpc, setup.nominal,
                                      setup.reference, &setup.truth);

  ScenarioResult result;
  Eigen::VectorXd x = setup.initialState;
  const int steps = static_cast<int>(std::round(sc.duration / sc.controlPeriod));
  const double hSub = sc.controlPeriod / sc.plantSubsteps;
  result.trace.reserve(steps);

  for (int k = 0; k < steps; ++k) {
    const double t = k * sc.controlPeriod;
    const JointReferenceSample ref = setup.reference->sample(t);
    const double err = (ref.position - x.head<2>()).norm();
    if (err > M_PI) {
      result.verdict = ScenarioResult::Verdict::Diverged;
      result.failureTime = t;
      break;
    }

    MpcController::StepResult sr;
    try {
      sr = controller->step(t, x);
    } catch (const std::exception&) {
      result.verdict = ScenarioResult::Verdict::SolverFailed;
      result.failureTime = t;
      break;
    }
    if (!sr.solverOk || !sr.input.allFinite()) {
      result.verdict = ScenarioResult::Verdict::SolverFailed;
      result.failureTime = t;
      break;
    }

    StepLog log;
    log.t = t;
    log.state = x;
    log.input = sr.input;
    log.sigma = sr.sliding.sigma;
    log.piHat = sr.piHat;
    log.adaptiveForce = sr.adaptiveForce;
    log.hClf = sr.hClf;
    log.epsilon = sr.epsilon;
    log.matchResidual = sr.matchResidual;
    log.clampMask = sr.clampMask;
    log.iterations = sr.iterations;
    log.kktResidual = sr.kktResidual;
    log.cost = sr.cost;
    log.maxDefect = sr.maxDefect;
    log.solveSeconds = sr.solveSeconds;
    log.linearError = err;
    log.angularErrorDeg = 0.0;

    GeneralizedState gs{x.head<2>(), x.tail<2>()};
    const DynamicsTerms nomTerms = setup.nominal->dynamicsTerms(gs);
    const DynamicsTerms payTerms =
        setup.nominal->payloadTerms(gs, setup.truth.payload);
    log.lyapunov = lyapunovDiagnostic(sr.sliding, nomTerms.M + payTerms.M,
                                      sr.piHat, setup.truth.trueParameters(),
                                      controller->estimate().gamma);
    result.trace.push_back(std::move(log));

    for (int s = 0; s < sc.plantSubsteps; ++s) {
      x = rk4Step([&](double, const Eigen::VectorXd& xs) {
        GeneralizedState g{xs.head<2>(), xs.tail<2>()};
        Eigen::VectorXd xdot(4);
        xdot.head<2>() = g.v;
        xdot.tail<2>() = trueForwardDynamics(setup.truth, g, sr.input);
        return xdot;
      }, t + s * hSub, x, hSub);
    }
    if (!x.allFinite()) {
      result.verdict = ScenarioResult::Verdict::Diverged;
      result.failureTime = t;
      break;
    }
  }

  std::tie(result.linearRmse, result.angularRmseDeg) = computeRmse(result.trace);
  return result;
}

}  // namespace

ScenarioResult runScenario(const Scenario& scenario) {
  Scenario sc = scenario;
  sc.applyModelDefaults();
  if (sc.duration <= sc.horizon) {
    throw std::invalid_argument("scenario duration must exceed the horizon");
  }
  if (sc.model == "quadruped") return runQuadruped(sc);
  if (sc.model == "arm2link") return runArm(sc);
  throw std::invalid_argument("unknown model: " + sc.model);
}

std::pair<double, double> computeRmse(const std::vector<StepLog>& trace,
                                      double skipInitial) {
  double sumLin = 0.0, sumAng = 0.0;
  int count = 0;
  for (const StepLog& log : trace) {
    if (log.t < skipInitial) continue;
    sumLin += log.linearError * log.linearError;
    sumAng += log.angularErrorDeg * log.angularErrorDeg;
    ++count;
  }
  if (count == 0) return {0.0, 0.0};
  return {std::sqrt(sumLin / count), std::sqrt(sumAng / count)};
}

SweepResult slopeForceSweep(const Scenario& baseScenario,
                            const std::vector<double>& forceGrid,
                            int parallelism) {
  for (size_t i = 1; i < forceGrid.size(); ++i) {
    if (forceGrid[i] <= forceGrid[i - 1]) {
      throw std::invalid_argument("force grid must be strictly increasing");
    }
  }

  struct Job {
    double force;
    ControllerVariant variant;
    ScenarioResult::Verdict verdict;
  };
  std::vector<Job> jobs;
  for (double f : forceGrid) {
    jobs.push_back({f, ControllerVariant::AclfMpc,
                    ScenarioResult::Verdict::Stable});
    jobs.push_back({f, ControllerVariant::MomentumObserverMpc,
                    ScenarioResult::Verdict::Stable});
  }

  SlopeWalkReference walkRef{SlopeWalkConfig{
      Eigen::Vector3d::Zero(), baseScenario.slopeDeg * M_PI / 180.0,
      baseScenario.walkSpeed, 1.0}};
  const Eigen::Vector3d against = -walkRef.travelDirection();

  std::atomic<size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const size_t i = cursor.fetch_add(1);
      if (i >= jobs.size()) return;
      Scenario sc = baseScenario;
      sc.variant = jobs[i].variant;
      sc.externalForceWorld = jobs[i].force * against;
      jobs[i].verdict = runScenario(sc).verdict;
    }
  };
  const int threads = std::max(1, parallelism);
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  SweepResult result;
  for (size_t i = 0; i < forceGrid.size(); ++i) {
    SweepRow row;
    row.force = forceGrid[i];
    row.adaptive = jobs[2 * i].verdict;
    row.observer = jobs[2 * i + 1].verdict;
    result.rows.push_back(row);
  }
  // Largest force below which every smaller grid value was also tolerated.
  auto prefixMax = [&](auto pick) {
    double best = -1.0;
    for (const SweepRow& row : result.rows) {
      if (pick(row) != ScenarioResult::Verdict::Stable) break;
      best = row.force;
    }
    return best;
  };
  result.maxToleratedAdaptive =
      prefixMax([](const SweepRow& r) { return r.adaptive; });
  result.maxToleratedObserver =
      prefixMax([](const SweepRow& r) { return r.observer; });
  return result;
}

}  // namespace aclfmpc
