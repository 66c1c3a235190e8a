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

#include "aclfmpc/mechanics/mechanical_model.hpp"

namespace aclfmpc {

/// Gains of the composite tracking error. For pose-controlled floating
/// bodies lambdaLin/lambdaRot act on the linear and rotational blocks;
/// joint-space systems use lambdaLin of full dimension and leave
/// lambdaRot empty. All blocks must be symmetric positive definite.
struct SlidingGains {
  Eigen::MatrixXd lambdaLin;
  Eigen::MatrixXd lambdaRot;
  Eigen::MatrixXd Kd;
};

/// Composite error sigma = (vd - v) + Lambda (error), reference velocity
/// vr = sigma + v and its time derivative. The error convention is
/// qTilde = qd - q, vTilde = vd - v throughout, so sigma = vr - v and
/// sigmaDot = vrDot - vdot hold identically.
struct SlidingSurfaceState {
  Eigen::VectorXd sigma;
  Eigen::VectorXd vr;
  Eigen::VectorXd vrDot;
  Eigen::Vector3d eo = Eigen::Vector3d::Zero();  // quaternion error (pose systems)
};

/// Pose reference sample: desired CoM position/orientation with the
/// desired twist and acceleration (velocity in world frame, angular rate
/// in the desired body frame).
struct PoseReferenceSample {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d linearVelocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d angularVelocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d linearAcceleration = Eigen::Vector3d::Zero();
  Eigen::Vector3d angularAcceleration = Eigen::Vector3d::Zero();
};

/// Quaternion orientation error e_o = eta*eps_d - eta_d*eps - eps_d x eps.
/// Zero iff the quaternions agree up to sign. Throws std::invalid_argument
/// for non-unit inputs (tolerance 1e-9).
Eigen::Vector3d quaternionError(const Eigen::Quaterniond& actual,
                                const Eigen::Quaterniond& desired);

/// Analytic time derivative of quaternionError under body-frame rates
/// omega (actual) and omegaDesired (desired frame).
Eigen::Vector3d quaternionErrorRate(const Eigen::Quaterniond& actual,
                                    const Eigen::Vector3d& omega,
                                    const Eigen::Quaterniond& desired,
                                    const Eigen::Vector3d& omegaDesired);

/// Composite error for the floating rigid body (state layout of
/// SingleRigidBodyModel).
SlidingSurfaceState composeSlidingState(const GeneralizedState& state,
                                        const PoseReferenceSample& reference,
                                        const SlidingGains& gains);

/// Composite error for joint-space systems (sigma = vTilde + Lambda qTilde).
SlidingSurfaceState composeSlidingStateJoint(const GeneralizedState& state,
                                             const Eigen::VectorXd& qDesired,
                                             const Eigen::VectorXd& vDesired,
                                             const Eigen::VectorXd& aDesired,
                                             const SlidingGains& gains);

/// V = 1/2 sigma' M sigma + 1/2 piTilde' Gamma^-1 piTilde. Needs the true
/// parameter error, so it is a simulation-side diagnostic only.
double lyapunovValue(const SlidingSurfaceState& sliding,
                     const Eigen::MatrixXd& combinedM,
                     const Eigen::VectorXd& piTilde,
                     const Eigen::MatrixXd& gamma);

/// Left-hand side of the stability constraint,
///   h_clf = -sigma' [-S tau + Yn pin + Yu piHat] - 1/2 sigma' Kd sigma,
/// where Yn pin = M vrDot + C vr + g from the nominal terms and yuPiHat
/// is the unknown-term estimate already mapped through the regressor.
/// The constraint imposed by the MPC is h_clf >= 0.
double clfConstraintValue(const SlidingSurfaceState& sliding,
                          const DynamicsTerms& nominalTerms,
                          const Eigen::VectorXd& tau,
                          const Eigen::VectorXd& yuPiHat,
                          const Eigen::MatrixXd& Kd);

}  // namespace aclfmpc
