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

#include "aclfmpc/clf/sliding_surface.hpp"

#include "aclfmpc/math_util.hpp"

namespace aclfmpc {
namespace {

void requireUnit(const Eigen::Quaterniond& q, const char* name) {
  if (std::abs(q.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string(name) + " quaternion is not unit-norm");
  }
}

// Body-frame quaternion kinematics: (etaDot, epsDot) of qDot = 1/2 q * (0, w).
void quaternionRates(const Eigen::Quaterniond& q, const Eigen::Vector3d& w,
                     double* etaDot, Eigen::Vector3d* epsDot) {
  const Eigen::Vector3d eps = q.vec();
  *etaDot = -0.5 * eps.dot(w);
  *epsDot = 0.5 * (q.w() * w + eps.cross(w));
}

}  // namespace

Eigen::Vector3d quaternionError(const Eigen::Quaterniond& actual,
                                const Eigen::Quaterniond& desired) {
  requireUnit(actual, "actual");
  requireUnit(desired, "desired");
  return actual.w() * desired.vec() - desired.w() * actual.vec() -
         desired.vec().cross(actual.vec());
}

Eigen::Vector3d quaternionErrorRate(const Eigen::Quaterniond& actual,
                                    const Eigen::Vector3d& omega,
                                    const Eigen::Quaterniond& desired,
                                    const Eigen::Vector3d& omegaDesired) {
  double etaDot, etaDotD;
  Eigen::Vector3d epsDot, epsDotD;
  quaternionRates(actual, omega, &etaDot, &epsDot);
  quaternionRates(desired, omegaDesired, &etaDotD, &epsDotD);

  return etaDot * desired.vec() + actual.w() * epsDotD -
         etaDotD * actual.vec() - desired.w() * epsDot -
         epsDotD.cross(actual.vec()) - desired.vec().cross(epsDot);
}

SlidingSurfaceState composeSlidingState(const GeneralizedState& state,
                                        const PoseReferenceSample& reference,
                                        const SlidingGains& gains) {
  const Eigen::Vector3d pTilde = reference.position - state.q.head<3>();
  const Eigen::Vector3d vTilde = reference.linearVelocity - state.v.head<3>();
  const Eigen::Vector3d omega = state.v.segment<3>(3);
  const Eigen::Quaterniond q = quaternionZyx(state.q.segment<3>(3));

  const Eigen::Vector3d eo = quaternionError(q, reference.orientation);
  const Eigen::Vector3d eoDot =
      quaternionErrorRate(q, omega, reference.orientation,
                          reference.angularVelocity);
  const Eigen::Vector3d omegaTilde = reference.angularVelocity - omega;

  SlidingSurfaceState out;
  out.eo = eo;
  out.sigma.resize(6);
  out.sigma.head<3>() = vTilde + gains.lambdaLin * pTilde;
  out.sigma.tail<3>() = omegaTilde + gains.lambdaRot * eo;
  out.vr = out.sigma + state.v;
  out.vrDot.resize(6);
  out.vrDot.head<3>() = reference.linearAcceleration + gains.lambdaLin * vTilde;
  out.vrDot.tail<3>() = reference.angularAcceleration + gains.lambdaRot * eoDot;
  return out;
}

SlidingSurfaceState composeSlidingStateJoint(const GeneralizedState& state,
                                             const Eigen::VectorXd& qDesired,
                                             const Eigen::VectorXd& vDesired,
                                             const Eigen::VectorXd& aDesired,
                                             const SlidingGains& gains) {
  SlidingSurfaceState out;
  const Eigen::VectorXd qTilde = qDesired - state.q;
  const Eigen::VectorXd vTilde = vDesired - state.v;
  out.sigma = vTilde + gains.lambdaLin * qTilde;
  out.vr = out.sigma + state.v;
  out.vrDot = aDesired + gains.lambdaLin * vTilde;
  return out;
}

double lyapunovValue(const SlidingSurfaceState& sliding,
                     const Eigen::MatrixXd& combinedM,
                     const Eigen::VectorXd& piTilde,
                     const Eigen::MatrixXd& gamma) {
  const double sigmaPart =
      0.5 * sliding.sigma.dot(combinedM * sliding.sigma);
  const double piPart = 0.5 * piTilde.dot(gamma.ldlt().solve(piTilde));
  return sigmaPart + piPart;
}

double clfConstraintValue(const SlidingSurfaceState& sliding,
                          const DynamicsTerms& nominalTerms,
                          const Eigen::VectorXd& tau,
                          const Eigen::VectorXd& yuPiHat,
                          const Eigen::MatrixXd& Kd) {
  const Eigen::VectorXd ynPin = nominalTerms.M * sliding.vrDot +
                                nominalTerms.C * sliding.vr + nominalTerms.g;
  const Eigen::VectorXd bracket = -nominalTerms.S * tau + ynPin + yuPiHat;
  return -sliding.sigma.dot(bracket) -
         0.5 * sliding.sigma.dot(Kd * sliding.sigma);
}

}  // namespace aclfmpc
