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

#include "aclfmpc/cli/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "aclfmpc/simlab/runner.hpp"

namespace aclfmpc {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void appendNamed(std::string* header, const std::string& prefix, int n) {
  for (int i = 0; i < n; ++i) {
    *header += "," + prefix + std::to_string(i);
  }
}

void writeFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace

void writeTraceCsv(const Scenario& scenario, const ScenarioResult& result,
                   const std::string& path) {
  std::string out;
  out += "# closed-loop trace for scenario '" + scenario.name + "' (" +
         variantName(scenario.variant) + ", " + scenario.model + ")\n";
  out += "# one row per control step; columns: time, state, applied input,\n";
  out += "# composite error sigma, stability margin h_clf, Lyapunov value V,\n";
  out += "# parameter estimates, compensated generalized force, residuals,\n";
  out += "# solver statistics. Solve wall time lives in the timing sidecar.\n";

  const int nx = result.trace.empty() ? 0 : int(result.trace[0].state.size());
  const int nu = result.trace.empty() ? 0 : int(result.trace[0].input.size());
  const int ns = result.trace.empty() ? 0 : int(result.trace[0].sigma.size());
  const int np = result.trace.empty() ? 0 : int(result.trace[0].piHat.size());
  const int nf = result.trace.empty() ? 0 : int(result.trace[0].adaptiveForce.size());

  std::string header = "t";
  appendNamed(&header, "x", nx);
  appendNamed(&header, "u", nu);
  appendNamed(&header, "sigma", ns);
  header += ",h_clf,V,lin_err_m,ang_err_deg,epsilon,match_residual";
  appendNamed(&header, "pihat", np);
  appendNamed(&header, "adp", nf);
  header += ",clamp_mask,iterations,kkt_residual,cost,max_defect";
  out += header + "\n";

  for (const StepLog& log : result.trace) {
    std::string row = num(log.t);
    for (int i = 0; i < nx; ++i) row += "," + num(log.state(i));
    for (int i = 0; i < nu; ++i) row += "," + num(log.input(i));
    for (int i = 0; i < ns; ++i) row += "," + num(log.sigma(i));
    row += "," + num(log.hClf) + "," + num(log.lyapunov) + "," +
           num(log.linearError) + "," + num(log.angularErrorDeg) + "," +
           num(log.epsilon) + "," + num(log.matchResidual);
    for (int i = 0; i < np; ++i) row += "," + num(log.piHat(i));
    for (int i = 0; i < nf; ++i) row += "," + num(log.adaptiveForce(i));
    row += "," + std::to_string(log.clampMask) + "," +
           std::to_string(log.iterations) + "," + num(log.kktResidual) + "," +
           num(log.cost) + "," + num(log.maxDefect);
    out += row + "\n";
  }
  writeFile(path, out);
}

void writePlotData(const Scenario& scenario, const ScenarioResult& result,
                   const std::string& path) {
  std::string out;
  out += "# plot data for scenario '" + scenario.name +
         "': t lin_err_m ang_err_deg sigma_norm h_clf V epsilon";
  const int np = result.trace.empty() ? 0 : int(result.trace[0].piHat.size());
  for (int i = 0; i < np; ++i) out += " pihat" + std::to_string(i);
  out += "\n";
  for (const StepLog& log : result.trace) {
    out += num(log.t) + " " + num(log.linearError) + " " +
           num(log.angularErrorDeg) + " " + num(log.sigma.norm()) + " " +
           num(log.hClf) + " " + num(log.lyapunov) + " " + num(log.epsilon);
    for (int i = 0; i < np; ++i) out += " " + num(log.piHat(i));
    out += "\n";
  }
  writeFile(path, out);
}

void writeTimingCsv(const ScenarioResult& result, const std::string& path) {
  std::string out = "# wall-clock solve time per control step (not covered "
                    "by the determinism guarantee)\nt,solve_seconds\n";
  for (const StepLog& log : result.trace) {
    out += num(log.t) + "," + num(log.solveSeconds) + "\n";
  }
  writeFile(path, out);
}

std::string summaryCsv(const std::vector<Scenario>& scenarios,
                       const std::vector<ScenarioResult>& results) {
  std::string out =
      "scenario,variant,model,horizon_s,linear_rmse_m,angular_rmse_deg,"
      "verdict,failure_time_s\n";
  for (size_t i = 0; i < scenarios.size(); ++i) {
    const ScenarioResult& r = results[i];
    out += scenarios[i].name + "," + variantName(scenarios[i].variant) + "," +
           scenarios[i].model + "," + num(scenarios[i].horizon) + "," +
           num(r.linearRmse) + "," + num(r.angularRmseDeg) + "," +
           verdictName(r.verdict) + "," + num(r.failureTime) + "\n";
  }
  return out;
}

std::string summaryText(const std::vector<Scenario>& scenarios,
                        const std::vector<ScenarioResult>& results) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-28s %-26s %10s %16s %17s %14s\n",
                "scenario", "variant", "horizon[s]", "linear RMSE [m]",
                "angular RMSE [d]", "verdict");
  out += buf;
  out += std::string(115, '-') + "\n";
  for (size_t i = 0; i < scenarios.size(); ++i) {
    const ScenarioResult& r = results[i];
    std::string lin = "-", ang = "-";
    if (r.stable()) {
      std::snprintf(buf, sizeof(buf), "%.4f", r.linearRmse);
      lin = buf;
      std::snprintf(buf, sizeof(buf), "%.3f", r.angularRmseDeg);
      ang = buf;
    }
    std::snprintf(buf, sizeof(buf), "%-28s %-26s %10.2f %16s %17s %14s\n",
                  scenarios[i].name.c_str(),
                  variantName(scenarios[i].variant).c_str(),
                  scenarios[i].horizon, lin.c_str(), ang.c_str(),
                  verdictName(r.verdict).c_str());
    out += buf;
  }
  return out;
}

int runExperiment(const ExperimentConfig& config, const std::string& outputDir) {
  namespace fs = std::filesystem;
  try {
    fs::create_directories(outputDir);
    writeFile((fs::path(outputDir) / "resolved.cfg").string(),
              writeConfig(config));

    std::vector<ScenarioResult> results(config.scenarios.size());
    std::vector<std::string> errors(config.scenarios.size());
    std::atomic<size_t> cursor{0};
    auto worker = [&]() {
      while (true) {
        const size_t i = cursor.fetch_add(1);
        if (i >= config.scenarios.size()) return;
        try {
          results[i] = runScenario(config.scenarios[i]);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    };
    const int threads = std::max(1, config.jobs);
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    bool internalError = false;
    for (size_t i = 0; i < config.scenarios.size(); ++i) {
      if (!errors[i].empty()) {
        std::cerr << "scenario " << config.scenarios[i].name
                  << " failed internally: " << errors[i] << "\n";
        internalError = true;
        continue;
      }
      const fs::path base = fs::path(outputDir) / config.scenarios[i].name;
      writeTraceCsv(config.scenarios[i], results[i], base.string() + ".csv");
      writePlotData(config.scenarios[i], results[i],
                    base.string() + "_plot.dat");
      writeTimingCsv(results[i], base.string() + "_timing.csv");
    }
    if (internalError) return 1;

    writeFile((fs::path(outputDir) / "summary.csv").string(),
              summaryCsv(config.scenarios, results));
    writeFile((fs::path(outputDir) / "summary.txt").string(),
              summaryText(config.scenarios, results));

    if (config.sweep.enabled) {
      const Scenario* base = nullptr;
      for (const Scenario& sc : config.scenarios) {
        if (sc.name == config.sweep.scenario) base = &sc;
      }
      const SweepResult sweep =
          slopeForceSweep(*base, config.sweep.forceGrid, config.jobs);
      std::string csv = "force_n,adaptive_verdict,observer_verdict\n";
      std::string txt = "force [N]   adaptive              observer\n";
      for (const SweepRow& row : sweep.rows) {
        csv += num(row.force) + "," + verdictName(row.adaptive) + "," +
               verdictName(row.observer) + "\n";
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%9.1f   %-20s  %-20s\n", row.force,
                      verdictName(row.adaptive).c_str(),
                      verdictName(row.observer).c_str());
        txt += buf;
      }
      txt += "max tolerated: adaptive " + num(sweep.maxToleratedAdaptive) +
             " N, observer " + num(sweep.maxToleratedObserver) + " N\n";
      writeFile((fs::path(outputDir) / "sweep.csv").string(), csv);
      writeFile((fs::path(outputDir) / "sweep.txt").string(), txt);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "experiment failed: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace aclfmpc
