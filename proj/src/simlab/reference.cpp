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

#include "aclfmpc/simlab/reference.hpp"

#include <cmath>

#include "aclfmpc/math_util.hpp"

namespace aclfmpc {

PoseReferenceSample StandingStepReference::sample(double t) const {
  double z = 0.0, pitch = 0.0, roll = 0.0;
  const int segment =
      t < 0.0 ? 0 : static_cast<int>(std::floor(t / config_.dwell)) % 8;
  switch (segment) {
    case 1: z = config_.zStep; break;
    case 2: z = -config_.zStep; break;
    case 3: pitch = config_.angleStep; break;
    case 4: pitch = -config_.angleStep; break;
    case 5: roll = config_.angleStep; break;
    case 6: roll = -config_.angleStep; break;
    default: break;  // nominal
  }
  PoseReferenceSample s;
  s.position = config_.basePosition + Eigen::Vector3d(0.0, 0.0, z);
  s.orientation = quaternionZyx({roll, pitch, config_.baseYaw});
  return s;
}

Eigen::Vector3d SlopeWalkReference::travelDirection() const {
  return {std::cos(config_.slopeAngle), 0.0, std::sin(config_.slopeAngle)};
}

PoseReferenceSample SlopeWalkReference::sample(double t) const {
  PoseReferenceSample s;
  const double tc = std::max(t - config_.startDelay, 0.0);
  s.position = config_.startPosition + config_.speed * tc * travelDirection();
  // Pitch the base nose-up to match the incline (ZYX pitch is positive
  // nose-down).
  s.orientation = quaternionZyx({0.0, -config_.slopeAngle, 0.0});
  s.linearVelocity =
      (t > config_.startDelay) ? config_.speed * travelDirection()
                               : Eigen::Vector3d::Zero().eval();
  return s;
}

JointReferenceSample StepJointReference::sample(double t) const {
  JointReferenceSample s;
  const int segment = t < 0.0 ? 0 : static_cast<int>(std::floor(t / dwell_)) % 2;
  s.position = (segment == 0) ? poseA_ : poseB_;
  s.velocity = Eigen::VectorXd::Zero(poseA_.size());
  s.acceleration = Eigen::VectorXd::Zero(poseA_.size());
  return s;
}

}  // namespace aclfmpc
