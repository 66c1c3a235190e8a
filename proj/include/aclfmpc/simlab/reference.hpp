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

#include "aclfmpc/clf/sliding_surface.hpp"

namespace aclfmpc {

/// Desired pose trajectory, evaluable anywhere inside the run plus one
/// horizon of lookahead.
class PoseReference {
 public:
  virtual ~PoseReference() = default;
  virtual PoseReferenceSample sample(double t) const = 0;
};

class ConstantPoseReference final : public PoseReference {
 public:
  explicit ConstantPoseReference(PoseReferenceSample sample)
      : sample_(std::move(sample)) {}
  PoseReferenceSample sample(double) const override { return sample_; }

 private:
  PoseReferenceSample sample_;
};

/// Standing protocol: piecewise-constant pose commands cycling through
/// height, pitch and roll offsets, one dwell each:
///   nominal, z+, z-, pitch+, pitch-, roll+, roll-, nominal, ...
struct StandingStepConfig {
  Eigen::Vector3d basePosition{0.0, 0.0, 0.5};
  double baseYaw = 0.0;
  double zStep = 0.05;       // [m]
  double angleStep = 0.15;   // [rad]
  double dwell = 2.0;        // [s]
};

class StandingStepReference final : public PoseReference {
 public:
  explicit StandingStepReference(StandingStepConfig config)
      : config_(std::move(config)) {}
  PoseReferenceSample sample(double t) const override;

 private:
  StandingStepConfig config_;
};

/// Constant-velocity walk along a slope: the base holds a slope-aligned
/// pitch while the position integrates the commanded speed along the
/// incline.
struct SlopeWalkConfig {
  Eigen::Vector3d startPosition{0.0, 0.0, 0.5};
  double slopeAngle = 0.0;   // [rad], incline about the world y-axis
  double speed = 0.1;        // [m/s] along the slope surface
  double startDelay = 1.0;   // [s] standing before the walk begins
};

class SlopeWalkReference final : public PoseReference {
 public:
  explicit SlopeWalkReference(SlopeWalkConfig config) : config_(std::move(config)) {}
  PoseReferenceSample sample(double t) const override;

  /// Unit direction of travel in world frame.
  Eigen::Vector3d travelDirection() const;

 private:
  SlopeWalkConfig config_;
};

struct JointReferenceSample {
  Eigen::VectorXd position;
  Eigen::VectorXd velocity;
  Eigen::VectorXd acceleration;
};

class JointReference {
 public:
  virtual ~JointReference() = default;
  virtual JointReferenceSample sample(double t) const = 0;
};

/// Alternates between two joint poses every dwell seconds.
class StepJointReference final : public JointReference {
 public:
  StepJointReference(Eigen::VectorXd poseA, Eigen::VectorXd poseB, double dwell)
      : poseA_(std::move(poseA)), poseB_(std::move(poseB)), dwell_(dwell) {}
  JointReferenceSample sample(double t) const override;

 private:
  Eigen::VectorXd poseA_, poseB_;
  double dwell_;
};

}  // namespace aclfmpc
