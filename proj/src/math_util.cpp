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

#include "aclfmpc/math_util.hpp"

#include <cmath>

namespace aclfmpc {

Eigen::Matrix3d skew(const Eigen::Vector3d& a) {
  Eigen::Matrix3d s;
  s << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
      -a.y(), a.x(), 0.0;
  return s;
}

Eigen::Matrix3d rotationZyx(const Eigen::Vector3d& rpy) {
  return (Eigen::AngleAxisd(rpy.z(), Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(rpy.y(), Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(rpy.x(), Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

Eigen::Quaterniond quaternionZyx(const Eigen::Vector3d& rpy) {
  return Eigen::AngleAxisd(rpy.z(), Eigen::Vector3d::UnitZ()) *
         Eigen::AngleAxisd(rpy.y(), Eigen::Vector3d::UnitY()) *
         Eigen::AngleAxisd(rpy.x(), Eigen::Vector3d::UnitX());
}

Eigen::Vector3d eulerZyxFromQuaternion(const Eigen::Quaterniond& q) {
  const Eigen::Matrix3d r = q.normalized().toRotationMatrix();
  const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
  const double roll = std::atan2(r(2, 1), r(2, 2));
  const double yaw = std::atan2(r(1, 0), r(0, 0));
  return {roll, pitch, yaw};
}

Eigen::Matrix3d eulerRateMap(const Eigen::Vector3d& rpy) {
  const double cr = std::cos(rpy.x()), sr = std::sin(rpy.x());
  const double cp = std::cos(rpy.y()), tp = std::tan(rpy.y());
  Eigen::Matrix3d t;
  t << 1.0, sr * tp, cr * tp,
       0.0, cr, -sr,
       0.0, sr / cp, cr / cp;
  return t;
}

bool chartValid(const Eigen::Vector3d& rpy, double margin) {
  return std::abs(rpy.y()) < M_PI / 2.0 - margin;
}

Eigen::Matrix<double, 3, 6> inertiaVecOperator(const Eigen::Vector3d& a) {
  Eigen::Matrix<double, 3, 6> l = Eigen::Matrix<double, 3, 6>::Zero();
  l(0, 0) = a.x(); l(0, 1) = a.y(); l(0, 2) = a.z();
  l(1, 1) = a.x(); l(1, 3) = a.y(); l(1, 4) = a.z();
  l(2, 2) = a.x(); l(2, 4) = a.y(); l(2, 5) = a.z();
  return l;
}

Eigen::Matrix3d inertiaFromVech(const Eigen::Matrix<double, 6, 1>& v) {
  Eigen::Matrix3d i;
  i << v(0), v(1), v(2),
       v(1), v(3), v(4),
       v(2), v(4), v(5);
  return i;
}

Eigen::Matrix<double, 6, 1> vechFromInertia(const Eigen::Matrix3d& inertia) {
  Eigen::Matrix<double, 6, 1> v;
  v << inertia(0, 0), inertia(0, 1), inertia(0, 2),
       inertia(1, 1), inertia(1, 2), inertia(2, 2);
  return v;
}

Eigen::MatrixXd fdJacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double eps) {
  Eigen::VectorXd xp = x;
  Eigen::MatrixXd jac;
  for (int i = 0; i < x.size(); ++i) {
    const double h = eps * std::max(1.0, std::abs(x(i)));
    xp(i) = x(i) + h;
    const Eigen::VectorXd fp = f(xp);
    xp(i) = x(i) - h;
    const Eigen::VectorXd fm = f(xp);
    xp(i) = x(i);
    if (jac.size() == 0) jac.resize(fp.size(), x.size());
    jac.col(i) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

Eigen::VectorXd rk4Step(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
    double t, const Eigen::VectorXd& x, double dt) {
  const Eigen::VectorXd k1 = f(t, x);
  const Eigen::VectorXd k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = f(t + dt, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace aclfmpc
