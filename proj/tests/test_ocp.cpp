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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aclfmpc/ocp/certainty_equivalence.hpp"
#include "aclfmpc/ocp/dare.hpp"
#include "aclfmpc/ocp/relaxed_barrier.hpp"
#include "aclfmpc/ocp/sqp_solver.hpp"
#include "aclfmpc/quadruped/quadruped_model.hpp"
#include "test_helpers.hpp"

using namespace aclfmpc;
using namespace aclfmpc::testing;

namespace {

// Double integrator with exact RK4 discretization.
OcpDefinition doubleIntegratorOcp(double horizon, int nodes) {
  OcpDefinition ocp;
  ocp.nx = 2;
  ocp.nu = 1;
  ocp.horizon = horizon;
  ocp.nodeCount = nodes;
  ocp.flow = [](double, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    Eigen::VectorXd dx(2);
    dx << x(1), u(0);
    return dx;
  };
  ocp.Q = Eigen::Vector2d(10.0, 1.0).asDiagonal();
  ocp.R = Eigen::VectorXd::Constant(1, 0.1).asDiagonal();
  ocp.stateRef = [](double) { return Eigen::Vector2d(1.0, 0.0); };
  ocp.inputRef = [](double) { return Eigen::VectorXd::Zero(1); };
  return ocp;
}

}  // namespace

TEST_CASE("relaxed barrier values and smoothness at the switch") {
  RelaxedBarrierConfig cfg{1.0, 0.1};
  CHECK(relaxedBarrier(1.0, cfg) == doctest::Approx(0.0));

  // Value and first two derivatives agree across the branch point.
  const double d = cfg.delta, h = 1e-8;
  CHECK(relErr(relaxedBarrier(d + h, cfg), relaxedBarrier(d - h, cfg)) < 1e-6);
  const double gPlus =
      (relaxedBarrier(d + 2 * h, cfg) - relaxedBarrier(d, cfg)) / (2 * h);
  const double gMinus =
      (relaxedBarrier(d, cfg) - relaxedBarrier(d - 2 * h, cfg)) / (2 * h);
  CHECK(relErr(gPlus, gMinus) < 1e-5);
  CHECK(relErr(gPlus, relaxedBarrierGrad(d, cfg)) < 1e-5);
  CHECK(relErr(relaxedBarrierHess(d + h, cfg), relaxedBarrierHess(d - h, cfg)) <
        1e-6);

  // Monotone decreasing on a wide grid, defined for negative arguments.
  double previous = relaxedBarrier(-5.0, cfg);
  for (double z = -4.9; z < 50.0; z += 0.1) {
    const double value = relaxedBarrier(z, cfg);
    CHECK(value < previous);
    previous = value;
  }

  // Derivatives match finite differences on both branches.
  RelaxedBarrierConfig cfg2{0.1, 1e-3};
  for (double z : {-2.0, -1e-4, 5e-4, 2e-3, 0.5, 20.0}) {
    const double fd =
        (relaxedBarrier(z + 1e-7, cfg2) - relaxedBarrier(z - 1e-7, cfg2)) / 2e-7;
    CHECK(relErr(fd, relaxedBarrierGrad(z, cfg2)) < 1e-5);
    const double fd2 = (relaxedBarrierGrad(z + 1e-7, cfg2) -
                        relaxedBarrierGrad(z - 1e-7, cfg2)) /
                       2e-7;
    CHECK(relErr(fd2, relaxedBarrierHess(z, cfg2)) < 1e-4);
  }
}

TEST_CASE("two-node transcription matches the analytic LQ solution") {
  OcpDefinition ocp = doubleIntegratorOcp(0.1, 2);
  Eigen::MatrixXd p(2, 2);
  p << 40.0, 6.0, 6.0, 8.0;
  ocp.terminal = TerminalCost{p, Eigen::Vector2d(1.0, 0.0)};

  const Eigen::Vector2d x0(0.2, -0.4);
  TranscribedNlp nlp(ocp, x0);
  const SolverResult res = solveSqp(nlp, std::nullopt, {});
  CHECK(res.converged);

  // Exact discrete map of the double integrator over dt.
  const double dt = 0.1;
  Eigen::Matrix2d ad;
  ad << 1.0, dt, 0.0, 1.0;
  const Eigen::Vector2d bd(0.5 * dt * dt, dt);
  const Eigen::Vector2d xref(1.0, 0.0);
  const double denom = dt * ocp.R(0, 0) + bd.dot(p * bd);
  const double uStar = -bd.dot(p * (ad * x0 - xref)) / denom;

  CHECK(res.inputs[0](0) == doctest::Approx(uStar).epsilon(1e-8));
  CHECK((res.states[1] - (ad * x0 + bd * res.inputs[0](0))).norm() < 1e-9);
}

TEST_CASE("stationary start with compatible inputs solves at near-zero cost") {
  OcpDefinition ocp = doubleIntegratorOcp(0.5, 6);
  ocp.stateRef = [](double) { return Eigen::Vector2d::Zero(); };
  TranscribedNlp nlp(ocp, Eigen::Vector2d::Zero());
  const SolverResult res = solveSqp(nlp, std::nullopt, {});
  CHECK(res.converged);
  CHECK(res.cost == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(res.maxDefect < 1e-10);
}

TEST_CASE("contradictory state equalities report non-convergence, no crash") {
  OcpDefinition ocp = doubleIntegratorOcp(0.3, 4);
  ocp.stateEquality = [](double, const Eigen::VectorXd& x) {
    Eigen::VectorXd g(2);
    g << x(0) - 1.0, x(0) - 2.0;  // cannot both hold
    return g;
  };
  TranscribedNlp nlp(ocp, Eigen::Vector2d::Zero());
  SqpSettings settings;
  settings.maxIterations = 12;
  const SolverResult res = solveSqp(nlp, std::nullopt, settings);
  CHECK(!res.converged);
  CHECK(res.equalityResidual > 0.4);  // at least the 1 vs 2 contradiction
  CHECK(res.decision.allFinite());
}

TEST_CASE("unconstrained convex problem converges in one iteration") {
  OcpDefinition ocp = doubleIntegratorOcp(0.4, 5);
  TranscribedNlp nlp(ocp, Eigen::Vector2d(0.3, 0.1));
  SqpSettings settings;
  settings.tolerance = 1e-9;
  const SolverResult res = solveSqp(nlp, std::nullopt, settings);
  CHECK(res.converged);
  CHECK(res.iterations == 1);

  // Warm start at the optimum: accepted without further steps.
  const SolverResult again = solveSqp(nlp, res.decision, settings);
  CHECK(again.converged);
  CHECK(again.iterations <= 1);
  CHECK((again.decision - res.decision).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("input-barrier solution matches a dense single-shooting oracle") {
  // Aggressive step with a tight input corridor so the barrier is active.
  OcpDefinition ocp = doubleIntegratorOcp(1.0, 11);
  const double uMax = 2.0;
  ocp.barrier = {0.05, 1e-3};
  ocp.inequality = [uMax](double, const Eigen::VectorXd&,
                          const Eigen::VectorXd& u) {
    Eigen::VectorXd h(2);
    h << uMax - u(0), u(0) + uMax;
    return h;
  };
  const Eigen::Vector2d x0(-1.0, 0.0);
  TranscribedNlp nlp(ocp, x0);
  SqpSettings settings;
  settings.maxIterations = 80;
  const SolverResult res = solveSqp(nlp, std::nullopt, settings);
  CHECK(res.converged);

  // Independent dense oracle: eliminate the states with the exact
  // discrete map and run damped Newton with finite-difference derivatives
  // on the reduced objective.
  const int nU = 10;
  const double dt = 0.1;
  Eigen::Matrix2d ad;
  ad << 1.0, dt, 0.0, 1.0;
  const Eigen::Vector2d bd(0.5 * dt * dt, dt);
  auto objective = [&](const Eigen::VectorXd& u) {
    double cost = 0.0;
    Eigen::Vector2d x = x0;
    for (int k = 0; k < nU; ++k) {
      const Eigen::Vector2d xe = x - Eigen::Vector2d(1.0, 0.0);
      cost += dt * (0.5 * xe.dot(ocp.Q * xe) + 0.05 * u(k) * u(k));
      cost += dt * (relaxedBarrier(uMax - u(k), ocp.barrier) +
                    relaxedBarrier(u(k) + uMax, ocp.barrier));
      x = ad * x + bd * u(k);
    }
    return cost;
  };
  Eigen::VectorXd u = Eigen::VectorXd::Zero(nU);
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd grad(nU);
    Eigen::MatrixXd hess(nU, nU);
    const double h = 1e-5;
    for (int i = 0; i < nU; ++i) {
      Eigen::VectorXd up = u, um = u;
      up(i) += h;
      um(i) -= h;
      grad(i) = (objective(up) - objective(um)) / (2 * h);
    }
    for (int i = 0; i < nU; ++i) {
      for (int j = i; j < nU; ++j) {
        Eigen::VectorXd upp = u, upm = u, ump = u, umm = u;
        upp(i) += h; upp(j) += h;
        upm(i) += h; upm(j) -= h;
        ump(i) -= h; ump(j) += h;
        umm(i) -= h; umm(j) -= h;
        hess(i, j) = hess(j, i) = (objective(upp) - objective(upm) -
                                   objective(ump) + objective(umm)) /
                                  (4 * h * h);
      }
    }
    const Eigen::VectorXd step =
        (hess + 1e-9 * Eigen::MatrixXd::Identity(nU, nU)).ldlt().solve(-grad);
    double alpha = 1.0;
    while (alpha > 1e-6 && objective(u + alpha * step) > objective(u)) {
      alpha *= 0.5;
    }
    u += alpha * step;
    if (step.lpNorm<Eigen::Infinity>() * alpha < 1e-10) break;
  }

  for (int k = 0; k < nU; ++k) {
    CHECK(std::abs(res.inputs[k](0) - u(k)) < 1e-4);
  }
  // The corridor genuinely binds.
  CHECK(res.inputs[0](0) > 0.5 * uMax);
  CHECK(res.inputs[0](0) < uMax + 0.1);
}

TEST_CASE("transcription gradients match central finite differences") {
  OcpDefinition ocp = doubleIntegratorOcp(0.6, 7);
  ocp.barrier = {0.1, 1e-3};
  ocp.inequality = [](double, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& u) {
    Eigen::VectorXd h(2);
    h << 3.0 - u(0), 2.0 - x(1);
    return h;
  };
  ocp.stateInputEquality = [](double, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& u) {
    Eigen::VectorXd g(1);
    g << 0.3 * x(0) + u(0) * 0.01 - 0.001;
    return g;
  };
  TranscribedNlp nlp(ocp, Eigen::Vector2d(0.4, -0.2));

  Rng rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd z =
        nlp.initialGuess() + rng.vector(nlp.varCount(), -0.5, 0.5);
    const Eigen::VectorXd grad = nlp.costGradient(z);
    const Eigen::MatrixXd jac = nlp.equalityJacobianDense(z);

    const Eigen::VectorXd gradFd =
        fdJacobian(
            [&](const Eigen::VectorXd& zz) {
              return Eigen::VectorXd(
                  Eigen::VectorXd::Constant(1, nlp.cost(zz)));
            },
            z, 1e-6)
            .row(0);
    CHECK(maxRelErr(grad, gradFd, 1e-7) < 1e-5);

    const Eigen::MatrixXd jacFd = fdJacobian(
        [&](const Eigen::VectorXd& zz) { return nlp.equalityResiduals(zz); },
        z, 1e-6);
    double worst = 0.0;
    for (int i = 0; i < jac.rows(); ++i) {
      worst = std::max(worst, maxRelErr(jac.row(i), jacFd.row(i), 1e-7));
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("barrier weight sweep converges to the constrained-feasible solution") {
  // The corridor is inactive at the optimum, so shrinking mu must drive
  // the solution cost to the unconstrained one monotonically.
  const Eigen::Vector2d x0(0.6, 0.0);
  auto solveWithMu = [&](double mu, bool constrained) {
    OcpDefinition ocp = doubleIntegratorOcp(1.0, 11);
    if (constrained) {
      ocp.barrier = {mu, 1e-3};
      ocp.inequality = [](double, const Eigen::VectorXd&,
                          const Eigen::VectorXd& u) {
        Eigen::VectorXd h(2);
        h << 30.0 - u(0), u(0) + 30.0;
        return h;
      };
    }
    TranscribedNlp nlp(ocp, x0);
    SqpSettings settings;
    settings.maxIterations = 60;
    const SolverResult res = solveSqp(nlp, std::nullopt, settings);
    REQUIRE(res.converged);
    // Tracking cost without the barrier contribution.
    double cost = 0.0;
    const double dt = ocp.nodeInterval();
    for (int k = 0; k + 1 < ocp.nodeCount; ++k) {
      const Eigen::VectorXd xe = res.states[k] - ocp.stateRef(0.0);
      cost += dt * (0.5 * xe.dot(ocp.Q * xe) +
                    0.5 * res.inputs[k].dot(ocp.R * res.inputs[k]));
    }
    return cost;
  };
  const double unconstrained = solveWithMu(0.0, false);
  const double c1 = solveWithMu(1e-1, true);
  const double c2 = solveWithMu(1e-2, true);
  const double c3 = solveWithMu(1e-3, true);
  CHECK(std::abs(c1 - unconstrained) > std::abs(c2 - unconstrained));
  CHECK(std::abs(c2 - unconstrained) > std::abs(c3 - unconstrained));
  CHECK(std::abs(c3 - unconstrained) < 1e-4 * std::max(1.0, unconstrained));
}

TEST_CASE("warm start shifted by one period stays within O(dt) of the old plan") {
  OcpDefinition ocp = doubleIntegratorOcp(1.0, 11);
  const Eigen::Vector2d x0(-0.5, 0.2);
  TranscribedNlp nlp0(ocp, x0);
  const SolverResult first = solveSqp(nlp0, std::nullopt, {});
  REQUIRE(first.converged);

  // Advance the plant consistently by one control period.
  const double dtc = 0.01;
  Eigen::VectorXd x = x0;
  x = rk4Step(
      [&](double t, const Eigen::VectorXd& xs) {
        return ocp.flow(t, xs, first.inputs[0]);
      },
      0.0, x, dtc);

  OcpDefinition ocp1 = ocp;
  ocp1.startTime = dtc;
  TranscribedNlp nlp1(ocp1, x);
  const SolverResult second = solveSqp(nlp1, nlp1.shiftedGuess(first), {});
  REQUIRE(second.converged);
  CHECK(second.iterations <= 3);

  // Compare the input plans on the overlapping window; the discrepancy
  // must scale with the elapsed period times the plan's own input rate.
  double inputRate = 0.0;
  for (int k = 0; k + 1 < static_cast<int>(first.inputs.size()); ++k) {
    inputRate = std::max(inputRate,
                         (first.inputs[k + 1] - first.inputs[k])
                                 .lpNorm<Eigen::Infinity>() /
                             ocp.nodeInterval());
  }
  double worst = 0.0;
  for (int k = 0; k + 1 < static_cast<int>(second.inputs.size()); ++k) {
    const double t = ocp1.nodeTime(k);
    const double s = (t - first.startTime) / ocp.nodeInterval();
    const int j = std::min(static_cast<int>(std::floor(s)),
                           static_cast<int>(first.inputs.size()) - 1);
    worst = std::max(
        worst, (second.inputs[k] - first.inputs[j]).lpNorm<Eigen::Infinity>());
  }
  CHECK(worst < 2.0 * inputRate * dtc + 1e-6);
}

TEST_CASE("scalar Riccati equation against the closed form") {
  const double a = 1.08, b = 0.2, q = 3.0, r = 0.5;
  const Eigen::MatrixXd p = solveDare(Eigen::MatrixXd::Constant(1, 1, a),
                                      Eigen::MatrixXd::Constant(1, 1, b),
                                      Eigen::MatrixXd::Constant(1, 1, q),
                                      Eigen::MatrixXd::Constant(1, 1, r));
  // b^2 p^2 + (r - a^2 r - q b^2) p - q r = 0, positive root.
  const double bb = r - a * a * r - q * b * b;
  const double root =
      (-bb + std::sqrt(bb * bb + 4.0 * b * b * q * r)) / (2.0 * b * b);
  CHECK(relErr(p(0, 0), root) < 1e-10);
}

TEST_CASE("zero state cost with a stable plant yields zero terminal value") {
  const Eigen::MatrixXd p = solveDare(Eigen::MatrixXd::Constant(1, 1, 0.9),
                                      Eigen::MatrixXd::Constant(1, 1, 0.1),
                                      Eigen::MatrixXd::Zero(1, 1),
                                      Eigen::MatrixXd::Constant(1, 1, 1.0));
  CHECK(std::abs(p(0, 0)) < 1e-12);
}

TEST_CASE("unstabilizable pair is rejected") {
  CHECK_THROWS_AS(solveDare(Eigen::MatrixXd::Constant(1, 1, 2.0),
                            Eigen::MatrixXd::Zero(1, 1),
                            Eigen::MatrixXd::Constant(1, 1, 1.0),
                            Eigen::MatrixXd::Constant(1, 1, 1.0)),
                  NonStabilizableError);
}

TEST_CASE("LQR terminal cost solves the Riccati equation of the linearization") {
  auto flow = [](double, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    Eigen::VectorXd dx(2);
    dx << x(1), -0.3 * std::sin(x(0)) + u(0);
    return dx;
  };
  const Eigen::MatrixXd q = Eigen::Vector2d(5.0, 0.5).asDiagonal();
  const Eigen::MatrixXd r = Eigen::VectorXd::Constant(1, 0.2).asDiagonal();
  const Eigen::Vector2d xEq(0.0, 0.0);
  const Eigen::VectorXd uEq = Eigen::VectorXd::Zero(1);
  const double dt = 0.05;
  const TerminalCost terminal = lqrTerminalCost(flow, q, r, xEq, uEq, dt);

  // Residual check with independently assembled discrete matrices.
  Eigen::VectorXd xu(3);
  xu << xEq, uEq;
  const Eigen::MatrixXd j = fdJacobian(
      [&](const Eigen::VectorXd& p) {
        return rk4Step(
            [&](double t, const Eigen::VectorXd& xs) {
              return flow(t, xs, p.tail(1));
            },
            0.0, Eigen::VectorXd(p.head(2)), dt);
      },
      xu);
  const Eigen::MatrixXd ad = j.leftCols(2), bd = j.rightCols(1);
  const Eigen::MatrixXd& p = terminal.P;
  const Eigen::MatrixXd residual =
      ad.transpose() * p * ad - p -
      ad.transpose() * p * bd * (dt * r + bd.transpose() * p * bd).inverse() *
          bd.transpose() * p * ad +
      dt * q;
  CHECK(residual.lpNorm<Eigen::Infinity>() < 1e-8);
  CHECK(p.isApprox(p.transpose(), 1e-12));

  // Not an equilibrium: rejected.
  CHECK_THROWS_AS(
      lqrTerminalCost(flow, q, r, Eigen::Vector2d(0.4, 0.0), uEq, dt),
      std::invalid_argument);
}

TEST_CASE("certainty-equivalence split basics") {
  Rng rng(61);
  // Identity actuation: w = tau - Yu piHat elementwise.
  const Eigen::MatrixXd yu = Eigen::MatrixXd::Random(3, 2);
  const Eigen::VectorXd piHat = rng.vector(2, -1.0, 1.0);
  const Eigen::VectorXd tau = rng.vector(3, -5.0, 5.0);
  const Eigen::VectorXd w = certaintyEquivalenceSplit(
      tau, yu, piHat, Eigen::MatrixXd::Identity(3, 3));
  CHECK((w - (tau - yu * piHat)).norm() < 1e-12);

  // Zero estimate: w = tau, for any actuation map.
  const Eigen::MatrixXd s = Eigen::MatrixXd::Random(3, 5);
  const Eigen::VectorXd tau5 = rng.vector(5, -5.0, 5.0);
  const Eigen::VectorXd w5 =
      certaintyEquivalenceSplit(tau5, yu, Eigen::VectorXd::Zero(2), s);
  CHECK((w5 - tau5).norm() < 1e-14);
}

TEST_CASE("two-feet stance rejects a torque about the contact line") {
  // Matched-uncertainty guard: with two contact points, a pure torque
  // about their connecting line cannot be produced by contact forces.
  SrbParams params;
  ContactMode mode;
  mode.inContact = {true, false, false, true};
  mode.footPositionWorld[0] = {0.3, 0.2, 0.0};
  mode.footPositionWorld[3] = {-0.3, -0.2, 0.0};
  mode.footPositionWorld[1] = mode.footPositionWorld[2] =
      Eigen::Vector3d::Zero();
  auto model = makeSrbModel(params, mode);

  GeneralizedState gs;
  gs.q = Eigen::VectorXd::Zero(6);
  gs.q(2) = 0.5;
  gs.v = Eigen::VectorXd::Zero(6);
  const DynamicsTerms terms = model->dynamicsTerms(gs);

  const Eigen::Vector3d line =
      (model->leverArm(gs, 0) - model->leverArm(gs, 3)).normalized();
  Eigen::VectorXd piHat = Eigen::VectorXd::Zero(16);
  piHat.segment<3>(13) = 4.0 * line;  // constant torque about the line

  const Eigen::MatrixXd yu =
      model->regressorAccel(gs, Eigen::VectorXd::Zero(6));
  const Eigen::VectorXd tau = Eigen::VectorXd::Zero(12);
  CHECK_THROWS_AS(certaintyEquivalenceSplit(tau, yu, piHat, terms.S),
                  UnmatchedDisturbanceError);

  // The same torque is matched once a third foot goes down.
  mode.inContact[1] = true;
  mode.footPositionWorld[1] = {0.3, -0.2, 0.0};
  auto model3 = makeSrbModel(params, mode);
  const DynamicsTerms terms3 = model3->dynamicsTerms(gs);
  CHECK_NOTHROW(certaintyEquivalenceSplit(tau, yu, piHat, terms3.S));
}
