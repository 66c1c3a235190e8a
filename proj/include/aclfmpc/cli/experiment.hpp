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

#include "aclfmpc/cli/config.hpp"

namespace aclfmpc {

/// Runs every scenario (and the sweep, when configured), writing per-run
/// traces, plot data and summary tables under outputDir. Controller
/// failure verdicts are data; the return value is nonzero only for
/// internal errors. Solve timings go to a *_timing.csv sidecar, the one
/// output excluded from the byte-identical determinism guarantee.
int runExperiment(const ExperimentConfig& config, const std::string& outputDir);

/// Serialized per-run trace (also the plot data source).
void writeTraceCsv(const Scenario& scenario, const ScenarioResult& result,
                   const std::string& path);
void writePlotData(const Scenario& scenario, const ScenarioResult& result,
                   const std::string& path);
void writeTimingCsv(const ScenarioResult& result, const std::string& path);

/// Summary rows in CSV and aligned-text form; failed runs are marked "-"
/// in the text table.
std::string summaryCsv(const std::vector<Scenario>& scenarios,
                       const std::vector<ScenarioResult>& results);
std::string summaryText(const std::vector<Scenario>& scenarios,
                        const std::vector<ScenarioResult>& results);

}  // namespace aclfmpc
