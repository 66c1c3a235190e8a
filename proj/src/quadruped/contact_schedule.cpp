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

#include "aclfmpc/quadruped/contact_schedule.hpp"

#include <cmath>

namespace aclfmpc {

int ContactMode::stanceCount() const {
  int n = 0;
  for (bool c : inContact) n += c ? 1 : 0;
  return n;
}

ContactSchedule::ContactSchedule(std::vector<ContactMode> modes, bool periodic)
    : modes_(std::move(modes)), periodic_(periodic) {
  if (modes_.empty()) throw std::invalid_argument("schedule needs modes");
  for (const auto& m : modes_) {
    if (m.duration <= 0.0) {
      throw std::invalid_argument("mode durations must be positive");
    }
    startTimes_.push_back(total_);
    total_ += m.duration;
  }
}

const ContactMode& ContactSchedule::modeAt(double t) const {
  double tq = t;
  if (periodic_) {
    tq = std::fmod(tq, total_);
    if (tq < 0.0) tq += total_;
  } else if (tq > total_ + 1e-12) {
    throw ScheduleGapError("contact schedule does not cover requested time");
  }
  tq = std::clamp(tq, 0.0, total_);
  // Modes are few; linear scan beats bookkeeping.
  for (int i = static_cast<int>(modes_.size()) - 1; i >= 0; --i) {
    if (tq >= startTimes_[i] - 1e-12) return modes_[i];
  }
  return modes_.front();
}

}  // namespace aclfmpc
