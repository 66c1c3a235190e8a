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
#include <array>
#include <stdexcept>
#include <vector>

namespace aclfmpc {

inline constexpr int kNumFeet = 4;

class ScheduleGapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One mode of the switched system: which feet carry force and where they
/// stand. Stance feet are fixed points in world frame; their lever arms
/// are recomputed from the body state at every evaluation.
struct ContactMode {
  double duration = 0.0;  // [s]
  std::array<bool, kNumFeet> inContact{true, true, true, true};
  std::array<Eigen::Vector3d, kNumFeet> footPositionWorld{};

  int stanceCount() const;
};

/// Ordered mode sequence. Periodic schedules wrap around; aperiodic ones
/// throw ScheduleGapError when queried past their end.
class ContactSchedule {
 public:
  ContactSchedule(std::vector<ContactMode> modes, bool periodic);

  const ContactMode& modeAt(double t) const;
  double totalDuration() const { return total_; }
  bool periodic() const { return periodic_; }
  const std::vector<ContactMode>& modes() const { return modes_; }

 private:
  std::vector<ContactMode> modes_;
  std::vector<double> startTimes_;
  double total_ = 0.0;
  bool periodic_ = false;
};

}  // namespace aclfmpc
