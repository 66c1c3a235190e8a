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

#include "aclfmpc/ocp/sqp_solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>

namespace aclfmpc {
namespace {

bool solveKkt(const TranscribedNlp::Linearization& lin, int nv, int ne,
              double shift, Eigen::VectorXd* dz, Eigen::VectorXd* lambda) {
  std::vector<Eigen::Triplet<double>> trip = lin.hessian;
  trip.reserve(trip.size() + 2 * lin.eqJacobian.size() + nv + ne);
  for (const auto& t : lin.eqJacobian) {
    trip.emplace_back(nv + t.row(), t.col(), t.value());
    trip.emplace_back(t.col(), nv + t.row(), t.value());
  }
  for (int i = 0; i < nv; ++i) trip.emplace_back(i, i, shift);
  for (int i = 0; i < ne; ++i) trip.emplace_back(nv + i, nv + i, -shift);

  Eigen::SparseMatrix<double> kkt(nv + ne, nv + ne);
  kkt.setFromTriplets(trip.begin(), trip.end());

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(kkt);
  if (lu.info() != Eigen::Success) return false;

  Eigen::VectorXd rhs(nv + ne);
  rhs.head(nv) = -lin.gradient;
  rhs.tail(ne) = -lin.eqResidual;
  const Eigen::VectorXd sol = lu.solve(rhs);
  if (!sol.allFinite()) return false;
  *dz = sol.head(nv);
  *lambda = sol.tail(ne);
  return true;
}

double stationarityNorm(const TranscribedNlp::Linearization& lin,
                        const Eigen::VectorXd& lambda) {
  Eigen::VectorXd s = lin.gradient;
  for (const auto& t : lin.eqJacobian) s(t.col()) += t.value() * lambda(t.row());
  return s.lpNorm<Eigen::Infinity>();
}

}  // namespace

SolverResult solveSqp(const TranscribedNlp& nlp,
                      const std::optional<Eigen::VectorXd>& warmStart,
                      const SqpSettings& settings) {
  if (settings.maxIterations < 1) {
    throw std::invalid_argument("maxIterations must be at least 1");
  }
  const int nv = nlp.varCount();
  const int ne = nlp.eqCount();

  Eigen::VectorXd z = warmStart ? *warmStart : nlp.initialGuess();
  double rho = 1.0;
  int steps = 0;
  bool converged = false;
  double kktResidual = std::numeric_limits<double>::infinity();

  for (int it = 0; it < settings.maxIterations; ++it) {
    const TranscribedNlp::Linearization lin = nlp.linearize(z);
    const double feasibility = lin.eqResidual.lpNorm<Eigen::Infinity>();

    // Plain Newton KKT first; shift only when the factorization is
    // near-singular.
    Eigen::VectorXd dz, lambda;
    bool solved = solveKkt(lin, nv, ne, 0.0, &dz, &lambda);
    double shift = std::max(settings.regularization, 1e-8);
    for (int attempt = 0; attempt < 8 && !solved; ++attempt) {
      solved = solveKkt(lin, nv, ne, shift, &dz, &lambda);
      shift *= 10.0;
    }
    if (!solved) break;  // hopeless KKT system; report best-so-far

    const double stationarity = stationarityNorm(lin, lambda);
    kktResidual = std::max(stationarity, feasibility);
    const double stepNorm = dz.lpNorm<Eigen::Infinity>();
    if (feasibility < settings.tolerance &&
        (stationarity < settings.tolerance ||
         stepNorm < settings.tolerance * (1.0 + z.lpNorm<Eigen::Infinity>()))) {
      converged = true;
      break;
    }

    // Exact-penalty merit; rho dominates the multipliers so the SQP step
    // is a descent direction for it.
    const double r1 = lin.eqResidual.lpNorm<1>();
    rho = std::max(rho, 1.5 * lambda.lpNorm<Eigen::Infinity>());
    const double gd = lin.gradient.dot(dz);
    if (r1 > 1e-14 && gd - rho * r1 > 0.0) rho = (gd + 1.0) / r1;
    const double merit0 = lin.cost + rho * r1;
    const double dirDeriv = gd - rho * r1;

    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < settings.maxLineSearchSteps; ++ls) {
      const Eigen::VectorXd zTrial = z + alpha * dz;
      const double meritTrial =
          nlp.cost(zTrial) +
          rho * nlp.equalityResiduals(zTrial).lpNorm<1>();
      if (std::isfinite(meritTrial) &&
          meritTrial <= merit0 + 1e-4 * alpha * std::min(dirDeriv, 0.0)) {
        z = zTrial;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    ++steps;
    if (!accepted) break;  // bounded backtracking exhausted
  }

  SolverResult result = nlp.decode(z);
  result.iterations = steps;
  result.converged = converged;
  result.kktResidual = kktResidual;
  return result;
}

}  // namespace aclfmpc
