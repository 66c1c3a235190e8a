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

#include <string>
#include <vector>

#include "aclfmpc/simlab/scenario.hpp"

namespace aclfmpc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Optional slope-disturbance sweep: reruns the named scenario over the
/// force grid under the adaptive controller and the momentum-observer
/// baseline.
struct SweepConfig {
  bool enabled = false;
  std::string scenario;
  std::vector<double> forceGrid;
};

struct ExperimentConfig {
  std::string name = "experiment";
  int jobs = 1;
  std::vector<Scenario> scenarios;
  SweepConfig sweep;
};

/// Parses a line-oriented section/key-value configuration file. Unknown
/// keys are rejected with line diagnostics; all defaults are materialized
/// into the result so serialized output is self-describing. Throws
/// ConfigError listing every violation.
ExperimentConfig parseConfig(const std::string& path);

/// Parses configuration text (same semantics as parseConfig).
ExperimentConfig parseConfigText(const std::string& text,
                                 const std::string& originLabel = "<memory>");

/// Serializes a fully materialized configuration; parseConfigText of the
/// output reproduces the input exactly.
std::string writeConfig(const ExperimentConfig& config);

/// Applies a "key=value" override to every scenario. Throws ConfigError
/// for unknown keys or unparsable values.
void applyScenarioOverride(ExperimentConfig* config, const std::string& assignment);

/// One line per scenario key: "key = default  (description)". Backs the
/// CLI --help default table.
std::string scenarioDefaultsTable();

}  // namespace aclfmpc
