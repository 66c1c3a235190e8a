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
#include <stdexcept>

namespace aclfmpc {

/// Generalized positions and velocities (q, v), dimensions fixed per model.
struct GeneralizedState {
  Eigen::VectorXd q;
  Eigen::VectorXd v;
};

/// Terms of the mechanical-system equation M vdot + C v + g = S tau, with
/// C in a factorization making Mdot - 2C skew-symmetric.
struct DynamicsTerms {
  Eigen::MatrixXd M;  // n x n, symmetric positive definite
  Eigen::MatrixXd C;  // n x n
  Eigen::VectorXd g;  // n
  Eigen::MatrixXd S;  // n x m actuator selection
};

/// Unknown-term parameter vector. For a rigid payload attached at the base
/// the layout is (mass [kg], first moment m*c [kg m] (3), rotational inertia
/// about the reference point [kg m^2] (vech, 6)); models may append further
/// entries (e.g. constant-wrench parameters).
struct InertialParameters {
  Eigen::VectorXd pi;
};

class ChartSingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mechanical system with linearly parametrized unknown terms:
/// all member functions are pure and instances are immutable, so a single
/// model may be shared across concurrent scenario runs.
class MechanicalModel {
 public:
  virtual ~MechanicalModel() = default;

  virtual int dof() const = 0;             // n
  virtual int inputDim() const = 0;        // m
  virtual int parameterDim() const = 0;    // p

  /// Nominal M, C, g, S at the given state. Throws ChartSingularityError
  /// near a chart boundary.
  virtual DynamicsTerms dynamicsTerms(const GeneralizedState& state) const = 0;

  /// Regressor Y(q, v, vdot) with Y * pi = M(pi) vdot + C(pi) v + g(pi)
  /// for the unknown-term parametrization.
  virtual Eigen::MatrixXd regressorAccel(const GeneralizedState& state,
                                         const Eigen::VectorXd& accel) const = 0;

  /// Regressor Y(q, v, vr, vrDot) with Y * pi = M(pi) vrDot + C(pi;q,v) vr
  /// + g(pi). Collapses to regressorAccel when vr = v, vrDot = vdot.
  virtual Eigen::MatrixXd regressorReference(
      const GeneralizedState& state, const Eigen::VectorXd& vr,
      const Eigen::VectorXd& vrDot) const = 0;

  /// Unknown-term dynamics contributions M_u, C_u, g_u for the given
  /// parameters (S left empty). Used by the simulated plant.
  virtual DynamicsTerms payloadTerms(const GeneralizedState& state,
                                     const InertialParameters& payload) const = 0;
};

}  // namespace aclfmpc
