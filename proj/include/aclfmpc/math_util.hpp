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
#include <functional>

namespace aclfmpc {

inline constexpr double kGravity = 9.81;  // [m/s^2]

/// Cross-product (hat) matrix: skew(a) * b == a x b.
Eigen::Matrix3d skew(const Eigen::Vector3d& a);

/// ZYX rotation from Euler angles stored as (roll, pitch, yaw):
/// R = Rz(yaw) * Ry(pitch) * Rx(roll), mapping base-frame vectors to world.
Eigen::Matrix3d rotationZyx(const Eigen::Vector3d& rpy);

/// Unit quaternion equivalent to rotationZyx(rpy).
Eigen::Quaterniond quaternionZyx(const Eigen::Vector3d& rpy);

/// Inverse of quaternionZyx, pitch restricted to (-pi/2, pi/2).
Eigen::Vector3d eulerZyxFromQuaternion(const Eigen::Quaterniond& q);

/// Mapping T with rpyDot = T(rpy) * omegaBase. Singular at |pitch| = pi/2.
Eigen::Matrix3d eulerRateMap(const Eigen::Vector3d& rpy);

/// True while the ZYX chart is usable: |pitch| < pi/2 - margin.
bool chartValid(const Eigen::Vector3d& rpy, double margin = 1e-3);

/// Linear operator L with I * a == L(a) * vech(I) for symmetric I,
/// vech ordering (Ixx, Ixy, Ixz, Iyy, Iyz, Izz).
Eigen::Matrix<double, 3, 6> inertiaVecOperator(const Eigen::Vector3d& a);

Eigen::Matrix3d inertiaFromVech(const Eigen::Matrix<double, 6, 1>& v);
Eigen::Matrix<double, 6, 1> vechFromInertia(const Eigen::Matrix3d& inertia);

/// Central-difference Jacobian of f at x, per-component step
/// eps * max(1, |x_i|).
Eigen::MatrixXd fdJacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double eps = 1e-6);

/// One classical Runge-Kutta 4 step of xdot = f(t, x).
Eigen::VectorXd rk4Step(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
    double t, const Eigen::VectorXd& x, double dt);

}  // namespace aclfmpc
