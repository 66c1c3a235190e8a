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

#include <CLI11.hpp>
#include <iostream>

#include "aclfmpc/cli/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "aclfmpc: simulation laboratory for adaptive CLF-constrained model "
      "predictive control of mechanical systems with matched parametric "
      "uncertainty"};
  app.require_subcommand(1);

  std::string configPath;
  std::string outDir = "out";
  int jobs = 0;
  long long seed = -1;
  std::vector<std::string> overrides;

  CLI::App* run = app.add_subcommand("run", "run all scenarios in a configuration");
  run->add_option("config", configPath, "configuration file")->required();
  run->add_option("--out", outDir, "output directory (default: out)");
  run->add_option("--jobs", jobs, "parallel scenario runs (default: from config)");
  run->add_option("--seed", seed, "override every scenario seed");
  run->add_option("--set", overrides,
                  "scenario key override key=value, applied to all scenarios; "
                  "see --defaults for keys");

  CLI::App* validate =
      app.add_subcommand("validate", "parse and validate a configuration");
  validate->add_option("config", configPath, "configuration file")->required();

  CLI::App* listVariants =
      app.add_subcommand("list-variants", "print the controller variants");

  bool showDefaults = false;
  app.add_flag("--defaults", showDefaults,
               "print the scenario key default table and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (showDefaults) {
    std::cout << aclfmpc::scenarioDefaultsTable();
    return 0;
  }

  if (listVariants->parsed()) {
    for (aclfmpc::ControllerVariant v : aclfmpc::allVariants()) {
      std::cout << aclfmpc::variantName(v) << "\n";
    }
    return 0;
  }

  try {
    aclfmpc::ExperimentConfig config = aclfmpc::parseConfig(configPath);
    for (const std::string& assignment : overrides) {
      aclfmpc::applyScenarioOverride(&config, assignment);
    }
    if (seed >= 0) {
      for (aclfmpc::Scenario& sc : config.scenarios) {
        sc.seed = static_cast<unsigned>(seed);
      }
    }
    if (jobs > 0) config.jobs = jobs;

    if (validate->parsed()) {
      std::cout << "configuration ok: " << config.scenarios.size()
                << " scenario(s)\n";
      return 0;
    }
    return aclfmpc::runExperiment(config, outDir);
  } catch (const aclfmpc::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
