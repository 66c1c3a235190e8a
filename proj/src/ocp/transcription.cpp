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

#include "aclfmpc/ocp/transcription.hpp"

#include <cmath>

#include "aclfmpc/math_util.hpp"

namespace aclfmpc {
namespace {
constexpr double kFdEps = 1e-6;

// Central-difference Jacobian of f over a stacked (x, u) point.
Eigen::MatrixXd fdJacobianXu(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&,
                                        const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
  Eigen::VectorXd xu(x.size() + u.size());
  xu << x, u;
  return fdJacobian(
      [&](const Eigen::VectorXd& p) {
        return f(p.head(x.size()), p.tail(u.size()));
      },
      xu, kFdEps);
}
}  // namespace

void OcpDefinition::validate() const {
  if (horizon <= 0.0) throw std::invalid_argument("horizon must be positive");
  if (nodeCount < 2) throw std::invalid_argument("need at least two nodes");
  if (nx <= 0 || nu <= 0) throw std::invalid_argument("nx/nu must be positive");
  if (!flow) throw std::invalid_argument("flow is required");
  if (Q.rows() != nx || Q.cols() != nx || R.rows() != nu || R.cols() != nu) {
    throw std::invalid_argument("cost weight dimension mismatch");
  }
  if (!Q.isApprox(Q.transpose(), 1e-9) || !R.isApprox(R.transpose(), 1e-9)) {
    throw std::invalid_argument("cost weights must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> rLlt(R);
  if (rLlt.info() != Eigen::Success) {
    throw std::invalid_argument("R must be positive definite");
  }
}

TranscribedNlp::TranscribedNlp(OcpDefinition ocp, Eigen::VectorXd initialState)
    : ocp_(std::move(ocp)), x0_(std::move(initialState)) {
  ocp_.validate();
  if (x0_.size() != ocp_.nx) {
    throw std::invalid_argument("initial state dimension mismatch");
  }
  const int n = ocp_.nodeCount;
  varCount_ = n * ocp_.nx + (n - 1) * ocp_.nu;

  // Probe constraint stacks once per node to record their row counts; the
  // counts may vary with the mode active at each node time.
  const Eigen::VectorXd uProbe =
      ocp_.inputRef ? ocp_.inputRef(ocp_.nodeTime(0)) : Eigen::VectorXd::Zero(ocp_.nu);
  if (ocp_.flow(ocp_.nodeTime(0), x0_, uProbe).size() != ocp_.nx) {
    throw std::invalid_argument("flow output dimension mismatch");
  }
  g1Rows_.assign(n, 0);
  g2Rows_.assign(n - 1, 0);
  ineqRows_.assign(n - 1, 0);
  eqCount_ = ocp_.nx;  // initial condition
  for (int k = 0; k < n; ++k) {
    const double t = ocp_.nodeTime(k);
    if (ocp_.stateEquality) {
      g1Rows_[k] = static_cast<int>(ocp_.stateEquality(t, x0_).size());
      eqCount_ += g1Rows_[k];
    }
    if (k < n - 1) {
      const Eigen::VectorXd u =
          ocp_.inputRef ? ocp_.inputRef(t) : Eigen::VectorXd::Zero(ocp_.nu);
      if (ocp_.stateInputEquality) {
        g2Rows_[k] = static_cast<int>(ocp_.stateInputEquality(t, x0_, u).size());
        eqCount_ += g2Rows_[k];
      }
      if (ocp_.inequality) {
        ineqRows_[k] = static_cast<int>(ocp_.inequality(t, x0_, u).size());
      }
    }
  }
  eqCount_ += (n - 1) * ocp_.nx;  // defects
}

Eigen::VectorXd TranscribedNlp::initialGuess() const {
  Eigen::VectorXd z(varCount_);
  const int n = ocp_.nodeCount;
  for (int k = 0; k < n; ++k) z.segment(stateIndex(k), ocp_.nx) = x0_;
  for (int k = 0; k < n - 1; ++k) {
    z.segment(inputIndex(k), ocp_.nu) =
        ocp_.inputRef ? ocp_.inputRef(ocp_.nodeTime(k))
                      : Eigen::VectorXd::Zero(ocp_.nu);
  }
  return z;
}

Eigen::VectorXd TranscribedNlp::shiftedGuess(const SolverResult& previous) const {
  if (previous.states.empty()) return initialGuess();
  const int nPrev = static_cast<int>(previous.states.size());
  // Receding-horizon use keeps horizon and node count fixed, so the
  // previous grid spacing equals ours.
  const double dtPrev = ocp_.nodeInterval();
  auto interpState = [&](double t) {
    const double s = (t - previous.startTime) / dtPrev;
    if (s <= 0.0) return previous.states.front();
    if (s >= nPrev - 1) return previous.states.back();
    const int k = static_cast<int>(std::floor(s));
    const double a = s - k;
    return Eigen::VectorXd((1.0 - a) * previous.states[k] +
                           a * previous.states[k + 1]);
  };
  auto interpInput = [&](double t) {
    const int nu = static_cast<int>(previous.inputs.size());
    const double s = (t - previous.startTime) / dtPrev;
    const int k = std::clamp(static_cast<int>(std::floor(s)), 0, nu - 1);
    return previous.inputs[k];
  };
  Eigen::VectorXd z(varCount_);
  z.segment(stateIndex(0), ocp_.nx) = x0_;
  for (int k = 1; k < ocp_.nodeCount; ++k) {
    z.segment(stateIndex(k), ocp_.nx) = interpState(ocp_.nodeTime(k));
  }
  for (int k = 0; k < ocp_.nodeCount - 1; ++k) {
    z.segment(inputIndex(k), ocp_.nu) = interpInput(ocp_.nodeTime(k));
  }
  return z;
}

Eigen::VectorXd TranscribedNlp::flowMap(int k, const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& u) const {
  return rk4Step(
      [&](double t, const Eigen::VectorXd& xs) { return ocp_.flow(t, xs, u); },
      ocp_.nodeTime(k), x, ocp_.nodeInterval());
}

Eigen::VectorXd TranscribedNlp::inequalityStack(int k, const Eigen::VectorXd& x,
                                                const Eigen::VectorXd& u) const {
  return ocp_.inequality(ocp_.nodeTime(k), x, u);
}

double TranscribedNlp::cost(const Eigen::VectorXd& z) const {
  const int n = ocp_.nodeCount;
  const double dt = ocp_.nodeInterval();
  double total = 0.0;
  for (int k = 0; k < n - 1; ++k) {
    const double t = ocp_.nodeTime(k);
    const Eigen::VectorXd xe =
        z.segment(stateIndex(k), ocp_.nx) - ocp_.stateRef(t);
    const Eigen::VectorXd ue =
        z.segment(inputIndex(k), ocp_.nu) - ocp_.inputRef(t);
    total += dt * (0.5 * xe.dot(ocp_.Q * xe) + 0.5 * ue.dot(ocp_.R * ue));
    if (ineqRows_[k] > 0) {
      const Eigen::VectorXd h = inequalityStack(
          k, z.segment(stateIndex(k), ocp_.nx), z.segment(inputIndex(k), ocp_.nu));
      for (int i = 0; i < h.size(); ++i) {
        total += dt * relaxedBarrier(h(i), ocp_.barrier);
      }
    }
  }
  if (ocp_.terminal) {
    const Eigen::VectorXd xe =
        z.segment(stateIndex(n - 1), ocp_.nx) - ocp_.terminal->xRef;
    total += 0.5 * xe.dot(ocp_.terminal->P * xe);
  }
  return total;
}

Eigen::VectorXd TranscribedNlp::equalityResiduals(const Eigen::VectorXd& z) const {
  Eigen::VectorXd r(eqCount_);
  const int n = ocp_.nodeCount;
  int row = 0;
  r.segment(row, ocp_.nx) = z.segment(stateIndex(0), ocp_.nx) - x0_;
  row += ocp_.nx;
  for (int k = 0; k < n - 1; ++k) {
    r.segment(row, ocp_.nx) =
        z.segment(stateIndex(k + 1), ocp_.nx) -
        flowMap(k, z.segment(stateIndex(k), ocp_.nx),
                z.segment(inputIndex(k), ocp_.nu));
    row += ocp_.nx;
  }
  for (int k = 0; k < n; ++k) {
    if (g1Rows_[k] == 0) continue;
    r.segment(row, g1Rows_[k]) =
        ocp_.stateEquality(ocp_.nodeTime(k), z.segment(stateIndex(k), ocp_.nx));
    row += g1Rows_[k];
  }
  for (int k = 0; k < n - 1; ++k) {
    if (g2Rows_[k] == 0) continue;
    r.segment(row, g2Rows_[k]) = ocp_.stateInputEquality(
        ocp_.nodeTime(k), z.segment(stateIndex(k), ocp_.nx),
        z.segment(inputIndex(k), ocp_.nu));
    row += g2Rows_[k];
  }
  return r;
}

TranscribedNlp::Linearization TranscribedNlp::linearize(
    const Eigen::VectorXd& z) const {
  Linearization lin;
  const int n = ocp_.nodeCount;
  const double dt = ocp_.nodeInterval();
  lin.gradient = Eigen::VectorXd::Zero(varCount_);
  lin.cost = 0.0;

  auto pushBlock = [&](int row0, int col0, const Eigen::MatrixXd& m,
                       std::vector<Eigen::Triplet<double>>* out) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0.0) out->emplace_back(row0 + i, col0 + j, m(i, j));
  };

  for (int k = 0; k < n - 1; ++k) {
    const double t = ocp_.nodeTime(k);
    const Eigen::VectorXd x = z.segment(stateIndex(k), ocp_.nx);
    const Eigen::VectorXd u = z.segment(inputIndex(k), ocp_.nu);
    const Eigen::VectorXd xe = x - ocp_.stateRef(t);
    const Eigen::VectorXd ue = u - ocp_.inputRef(t);
    lin.cost += dt * (0.5 * xe.dot(ocp_.Q * xe) + 0.5 * ue.dot(ocp_.R * ue));
    lin.gradient.segment(stateIndex(k), ocp_.nx) += dt * (ocp_.Q * xe);
    lin.gradient.segment(inputIndex(k), ocp_.nu) += dt * (ocp_.R * ue);

    Eigen::MatrixXd hxx = dt * ocp_.Q;
    Eigen::MatrixXd huu = dt * ocp_.R;
    Eigen::MatrixXd hxu = Eigen::MatrixXd::Zero(ocp_.nx, ocp_.nu);

    if (ineqRows_[k] > 0) {
      const Eigen::VectorXd h = inequalityStack(k, x, u);
      const Eigen::MatrixXd jh = fdJacobianXu(
          [&](const Eigen::VectorXd& xs, const Eigen::VectorXd& us) {
            return inequalityStack(k, xs, us);
          },
          x, u);
      for (int i = 0; i < h.size(); ++i) {
        lin.cost += dt * relaxedBarrier(h(i), ocp_.barrier);
        const double g1 = dt * relaxedBarrierGrad(h(i), ocp_.barrier);
        const double g2 = dt * relaxedBarrierHess(h(i), ocp_.barrier);
        const Eigen::VectorXd jx = jh.row(i).head(ocp_.nx);
        const Eigen::VectorXd ju = jh.row(i).tail(ocp_.nu);
        lin.gradient.segment(stateIndex(k), ocp_.nx) += g1 * jx;
        lin.gradient.segment(inputIndex(k), ocp_.nu) += g1 * ju;
        hxx += g2 * jx * jx.transpose();
        huu += g2 * ju * ju.transpose();
        hxu += g2 * jx * ju.transpose();
      }
    }
    pushBlock(stateIndex(k), stateIndex(k), hxx, &lin.hessian);
    pushBlock(inputIndex(k), inputIndex(k), huu, &lin.hessian);
    pushBlock(stateIndex(k), inputIndex(k), hxu, &lin.hessian);
    pushBlock(inputIndex(k), stateIndex(k), hxu.transpose(), &lin.hessian);
  }
  if (ocp_.terminal) {
    const Eigen::VectorXd xe =
        z.segment(stateIndex(n - 1), ocp_.nx) - ocp_.terminal->xRef;
    lin.cost += 0.5 * xe.dot(ocp_.terminal->P * xe);
    lin.gradient.segment(stateIndex(n - 1), ocp_.nx) += ocp_.terminal->P * xe;
    pushBlock(stateIndex(n - 1), stateIndex(n - 1), ocp_.terminal->P,
              &lin.hessian);
  }

  // Equality residuals and Jacobian.
  lin.eqResidual = equalityResiduals(z);
  int row = 0;
  pushBlock(row, stateIndex(0), Eigen::MatrixXd::Identity(ocp_.nx, ocp_.nx),
            &lin.eqJacobian);
  row += ocp_.nx;
  for (int k = 0; k < n - 1; ++k) {
    const Eigen::VectorXd x = z.segment(stateIndex(k), ocp_.nx);
    const Eigen::VectorXd u = z.segment(inputIndex(k), ocp_.nu);
    const Eigen::MatrixXd jf = fdJacobianXu(
        [&](const Eigen::VectorXd& xs, const Eigen::VectorXd& us) {
          return flowMap(k, xs, us);
        },
        x, u);
    pushBlock(row, stateIndex(k + 1),
              Eigen::MatrixXd::Identity(ocp_.nx, ocp_.nx), &lin.eqJacobian);
    pushBlock(row, stateIndex(k), -jf.leftCols(ocp_.nx), &lin.eqJacobian);
    pushBlock(row, inputIndex(k), -jf.rightCols(ocp_.nu), &lin.eqJacobian);
    row += ocp_.nx;
  }
  for (int k = 0; k < n; ++k) {
    if (g1Rows_[k] == 0) continue;
    const Eigen::VectorXd x = z.segment(stateIndex(k), ocp_.nx);
    const Eigen::MatrixXd j = fdJacobian(
        [&](const Eigen::VectorXd& xs) {
          return ocp_.stateEquality(ocp_.nodeTime(k), xs);
        },
        x, kFdEps);
    pushBlock(row, stateIndex(k), j, &lin.eqJacobian);
    row += g1Rows_[k];
  }
  for (int k = 0; k < n - 1; ++k) {
    if (g2Rows_[k] == 0) continue;
    const Eigen::VectorXd x = z.segment(stateIndex(k), ocp_.nx);
    const Eigen::VectorXd u = z.segment(inputIndex(k), ocp_.nu);
    const Eigen::MatrixXd j = fdJacobianXu(
        [&](const Eigen::VectorXd& xs, const Eigen::VectorXd& us) {
          return ocp_.stateInputEquality(ocp_.nodeTime(k), xs, us);
        },
        x, u);
    pushBlock(row, stateIndex(k), j.leftCols(ocp_.nx), &lin.eqJacobian);
    pushBlock(row, inputIndex(k), j.rightCols(ocp_.nu), &lin.eqJacobian);
    row += g2Rows_[k];
  }
  return lin;
}

Eigen::VectorXd TranscribedNlp::costGradient(const Eigen::VectorXd& z) const {
  return linearize(z).gradient;
}

Eigen::MatrixXd TranscribedNlp::equalityJacobianDense(
    const Eigen::VectorXd& z) const {
  const Linearization lin = linearize(z);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(eqCount_, varCount_);
  for (const auto& t : lin.eqJacobian) j(t.row(), t.col()) += t.value();
  return j;
}

SolverResult TranscribedNlp::decode(const Eigen::VectorXd& z) const {
  SolverResult res;
  const int n = ocp_.nodeCount;
  res.states.reserve(n);
  res.inputs.reserve(n - 1);
  for (int k = 0; k < n; ++k) {
    res.states.push_back(z.segment(stateIndex(k), ocp_.nx));
  }
  for (int k = 0; k < n - 1; ++k) {
    res.inputs.push_back(z.segment(inputIndex(k), ocp_.nu));
    if (ineqRows_[k] > 0) {
      res.inequalityValues.push_back(
          inequalityStack(k, res.states[k], res.inputs[k]));
    } else {
      res.inequalityValues.push_back(Eigen::VectorXd());
    }
  }
  res.cost = cost(z);
  const Eigen::VectorXd r = equalityResiduals(z);
  res.equalityResidual = r.lpNorm<Eigen::Infinity>();
  res.maxDefect =
      r.segment(ocp_.nx, (n - 1) * ocp_.nx).lpNorm<Eigen::Infinity>();
  res.startTime = ocp_.startTime;
  res.decision = z;
  return res;
}

}  // namespace aclfmpc
