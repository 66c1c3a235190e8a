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

#include "aclfmpc/cli/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace aclfmpc {
namespace {

std::string formatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parseDouble(const std::string& s) {
  size_t pos = 0;
  const double v = std::stod(s, &pos);
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

std::vector<double> parseDoubleList(const std::string& s) {
  std::istringstream iss(s);
  std::vector<double> out;
  std::string tok;
  while (iss >> tok) out.push_back(parseDouble(tok));
  return out;
}

std::string formatVector(const Eigen::VectorXd& v) {
  std::string out;
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += formatDouble(v(i));
  }
  return out;
}

Eigen::VectorXd parseVector(const std::string& s, int expected) {
  const std::vector<double> vals = parseDoubleList(s);
  if (expected >= 0 && static_cast<int>(vals.size()) != expected) {
    throw std::invalid_argument("expected " + std::to_string(expected) +
                                " entries, got " + std::to_string(vals.size()));
  }
  return Eigen::Map<const Eigen::VectorXd>(vals.data(),
                                           static_cast<int>(vals.size()));
}

bool parseBool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("expected true/false");
}

struct FieldDef {
  std::string key;
  std::string description;
  std::function<std::string(const Scenario&)> get;
  std::function<void(Scenario&, const std::string&)> set;
};

#define SCALAR_FIELD(key, member, desc)                                   \
  FieldDef{key, desc,                                                     \
           [](const Scenario& s) { return formatDouble(s.member); },      \
           [](Scenario& s, const std::string& v) { s.member = parseDouble(v); }}

#define INT_FIELD(key, member, desc)                                      \
  FieldDef{key, desc,                                                     \
           [](const Scenario& s) { return std::to_string(s.member); },    \
           [](Scenario& s, const std::string& v) {                        \
             s.member = std::stoi(v);                                     \
           }}

#define VEC3_FIELD(key, member, desc)                                     \
  FieldDef{key, desc,                                                     \
           [](const Scenario& s) {                                        \
             return formatVector(Eigen::VectorXd(s.member));              \
           },                                                             \
           [](Scenario& s, const std::string& v) {                        \
             s.member = parseVector(v, 3);                                \
           }}

#define VECX_FIELD(key, member, desc)                                     \
  FieldDef{key, desc,                                                     \
           [](const Scenario& s) { return formatVector(s.member); },      \
           [](Scenario& s, const std::string& v) {                        \
             s.member = parseVector(v, -1);                               \
           }}

#define BOOL_FIELD(key, member, desc)                                     \
  FieldDef{key, desc,                                                     \
           [](const Scenario& s) { return s.member ? "true" : "false"; }, \
           [](Scenario& s, const std::string& v) { s.member = parseBool(v); }}

const std::vector<FieldDef>& scenarioFields() {
  static const std::vector<FieldDef> kFields = {
      FieldDef{"model", "quadruped | arm2link",
               [](const Scenario& s) { return s.model; },
               [](Scenario& s, const std::string& v) { s.model = v; }},
      FieldDef{"variant", "controller variant (see list-variants)",
               [](const Scenario& s) { return variantName(s.variant); },
               [](Scenario& s, const std::string& v) {
                 s.variant = variantFromName(v);
               }},
      FieldDef{"reference", "standing_steps | slope_walk | constant",
               [](const Scenario& s) { return s.reference; },
               [](Scenario& s, const std::string& v) { s.reference = v; }},
      SCALAR_FIELD("duration_s", duration, "simulated time"),
      SCALAR_FIELD("horizon_s", horizon, "prediction horizon"),
      INT_FIELD("nodes", nodes, "shooting nodes over the horizon"),
      SCALAR_FIELD("control_period_s", controlPeriod, "replanning period"),
      INT_FIELD("plant_substeps", plantSubsteps, "plant RK4 steps per period"),
      FieldDef{"seed", "initial-state jitter seed",
               [](const Scenario& s) { return std::to_string(s.seed); },
               [](Scenario& s, const std::string& v) {
                 s.seed = static_cast<unsigned>(std::stoul(v));
               }},
      SCALAR_FIELD("nominal_mass_kg", nominalMass, "model mass"),
      VEC3_FIELD("nominal_inertia_kgm2", nominalInertiaDiag,
                 "model inertia diagonal"),
      SCALAR_FIELD("stand_height_m", standHeight, "CoM height over feet"),
      SCALAR_FIELD("foot_half_x_m", footHalfX, "stance half length"),
      SCALAR_FIELD("foot_half_y_m", footHalfY, "stance half width"),
      SCALAR_FIELD("payload_mass_kg", payloadMass, "true unmodeled mass"),
      VEC3_FIELD("payload_com_m", payloadCom, "payload CoM offset, base frame"),
      VEC3_FIELD("payload_inertia_kgm2", payloadInertiaDiag,
                 "payload inertia diagonal about its CoM"),
      VEC3_FIELD("external_force_world_n", externalForceWorld,
                 "constant applied force, world frame"),
      VEC3_FIELD("external_torque_base_nm", externalTorqueBase,
                 "constant applied torque, base frame"),
      SCALAR_FIELD("step_z_m", stepZ, "height step magnitude"),
      SCALAR_FIELD("step_angle_rad", stepAngle, "pitch/roll step magnitude"),
      SCALAR_FIELD("dwell_s", dwell, "step dwell time"),
      SCALAR_FIELD("slope_deg", slopeDeg, "walking slope"),
      SCALAR_FIELD("walk_speed_mps", walkSpeed, "commanded walk speed"),
      SCALAR_FIELD("gait_swing_s", gaitSwing, "single-foot swing phase"),
      SCALAR_FIELD("gait_stance_s", gaitStance, "all-stance phase"),
      VECX_FIELD("q_diag", qDiag, "stage state weight diagonal"),
      VECX_FIELD("r_diag", rDiag, "stage input weight diagonal"),
      SCALAR_FIELD("lambda_lin_per_s", lambdaLin, "linear error gain"),
      SCALAR_FIELD("lambda_rot_per_s", lambdaRot, "rotational error gain"),
      VECX_FIELD("kd_diag", kdDiag, "stability-margin weight diagonal"),
      VECX_FIELD("gamma_diag", gammaDiag, "adaptation gain diagonal"),
      VECX_FIELD("pi_scale", piScale, "parameter scales for the projection box"),
      BOOL_FIELD("freeze_torque_params", freezeTorqueParams,
                 "pin the constant-torque parameters at zero"),
      SCALAR_FIELD("barrier_mu", barrierMu, "barrier weight"),
      SCALAR_FIELD("barrier_delta", barrierDelta, "barrier relaxation"),
      SCALAR_FIELD("friction_mu", frictionMu, "friction coefficient"),
      SCALAR_FIELD("cone_epsilon_n", coneEpsilon, "cone smoothing"),
      SCALAR_FIELD("observer_gain_per_s", observerGain, "momentum observer gain"),
      INT_FIELD("sqp_iterations", sqpIterations, "SQP iterations per period"),
      SCALAR_FIELD("sqp_tolerance", sqpTolerance, "SQP convergence tolerance"),
      SCALAR_FIELD("arm_payload_mass_kg", armPayloadMass, "unknown tip mass"),
      SCALAR_FIELD("arm_step_angle_rad", armStepAngle, "joint step magnitude"),
  };
  return kFields;
}

#undef SCALAR_FIELD
#undef INT_FIELD
#undef VEC3_FIELD
#undef VECX_FIELD
#undef BOOL_FIELD

const FieldDef* findField(const std::string& key) {
  for (const FieldDef& f : scenarioFields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

void validateConfig(const ExperimentConfig& config,
                    std::vector<std::string>* violations) {
  if (config.scenarios.empty()) violations->push_back("no scenarios");
  if (config.jobs < 1) violations->push_back("jobs must be at least 1");
  std::map<std::string, int> names;
  for (const Scenario& sc : config.scenarios) {
    if (++names[sc.name] == 2) {
      violations->push_back("duplicate scenario name: " + sc.name);
    }
    const std::string where = "scenario " + sc.name + ": ";
    if (sc.model != "quadruped" && sc.model != "arm2link") {
      violations->push_back(where + "unknown model " + sc.model);
      continue;
    }
    if (sc.duration <= sc.horizon) {
      violations->push_back(where + "duration_s must exceed horizon_s");
    }
    if (sc.nodes < 2) violations->push_back(where + "nodes must be >= 2");
    if (sc.horizon <= 0.0) violations->push_back(where + "horizon_s must be > 0");
    if (sc.controlPeriod <= 0.0) {
      violations->push_back(where + "control_period_s must be > 0");
    }
    if (sc.barrierMu <= 0.0 || sc.barrierDelta <= 0.0) {
      violations->push_back(where + "barrier parameters must be > 0");
    }
    if (sc.reference != "standing_steps" && sc.reference != "slope_walk" &&
        sc.reference != "constant") {
      violations->push_back(where + "unknown reference " + sc.reference);
    }

    const bool quad = sc.model == "quadruped";
    const int nx = quad ? 12 : 4;
    const int nu = quad ? 12 : 2;
    const int np = quad ? 16 : 1;
    auto checkSize = [&](const Eigen::VectorXd& v, int expected,
                         const char* key) {
      if (v.size() != 0 && v.size() != expected) {
        violations->push_back(where + std::string(key) + " needs " +
                              std::to_string(expected) + " entries");
        return false;
      }
      return v.size() != 0;
    };
    checkSize(sc.qDiag, nx, "q_diag");
    checkSize(sc.rDiag, nu, "r_diag");
    checkSize(sc.kdDiag, nx / 2, "kd_diag");
    checkSize(sc.piScale, np, "pi_scale");
    if (checkSize(sc.gammaDiag, np, "gamma_diag")) {
      // Eigenvalue check on the assembled gain so a future full-matrix
      // override inherits the same validation.
      Eigen::MatrixXd gamma = sc.gammaDiag.asDiagonal();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma);
      const double minEig = es.eigenvalues().minCoeff();
      if (minEig < 0.0) {
        violations->push_back(where +
                              "gamma_diag is not positive semidefinite, "
                              "eigenvalue " +
                              formatDouble(minEig));
      }
    }
    if (sc.rDiag.size() == nu && sc.rDiag.minCoeff() <= 0.0) {
      violations->push_back(where + "r_diag must be positive");
    }
    if (sc.kdDiag.size() == nx / 2 && sc.kdDiag.minCoeff() <= 0.0) {
      violations->push_back(where + "kd_diag must be positive");
    }
  }
  if (config.sweep.enabled) {
    bool found = false;
    for (const Scenario& sc : config.scenarios) {
      if (sc.name == config.sweep.scenario) found = true;
    }
    if (!found) {
      violations->push_back("sweep references unknown scenario " +
                            config.sweep.scenario);
    }
    for (size_t i = 1; i < config.sweep.forceGrid.size(); ++i) {
      if (config.sweep.forceGrid[i] <= config.sweep.forceGrid[i - 1]) {
        violations->push_back("sweep force grid must be strictly increasing");
        break;
      }
    }
    if (config.sweep.forceGrid.empty()) {
      violations->push_back("sweep force grid is empty");
    }
  }
}

}  // namespace

ExperimentConfig parseConfigText(const std::string& text,
                                 const std::string& originLabel) {
  ExperimentConfig config;
  std::vector<std::string> violations;

  enum class Section { None, Experiment, Scenario, Sweep };
  Section section = Section::None;
  Scenario current;
  bool haveScenario = false;

  auto flushScenario = [&]() {
    if (haveScenario) {
      current.applyModelDefaults();
      config.scenarios.push_back(current);
    }
    haveScenario = false;
  };

  std::istringstream iss(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(iss, line)) {
    ++lineNo;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;

    const std::string at =
        originLabel + ":" + std::to_string(lineNo) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        violations.push_back(at + "malformed section header");
        continue;
      }
      std::istringstream hs(line.substr(1, line.size() - 2));
      std::string kind, arg;
      hs >> kind;
      std::getline(hs, arg);
      arg = trim(arg);
      if (kind == "experiment") {
        section = Section::Experiment;
      } else if (kind == "scenario") {
        flushScenario();
        section = Section::Scenario;
        current = Scenario{};
        current.name = arg.empty() ? "scenario" : arg;
        haveScenario = true;
      } else if (kind == "sweep") {
        section = Section::Sweep;
        config.sweep.enabled = true;
      } else {
        violations.push_back(at + "unknown section [" + kind + "]");
        section = Section::None;
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      violations.push_back(at + "expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    try {
      switch (section) {
        case Section::Experiment:
          if (key == "name") {
            config.name = value;
          } else if (key == "jobs") {
            config.jobs = std::stoi(value);
          } else {
            violations.push_back(at + "unknown experiment key " + key);
          }
          break;
        case Section::Scenario: {
          const FieldDef* field = findField(key);
          if (field == nullptr) {
            violations.push_back(at + "unknown scenario key " + key);
          } else {
            field->set(current, value);
          }
          break;
        }
        case Section::Sweep:
          if (key == "scenario") {
            config.sweep.scenario = value;
          } else if (key == "force_grid_n") {
            config.sweep.forceGrid = parseDoubleList(value);
          } else {
            violations.push_back(at + "unknown sweep key " + key);
          }
          break;
        case Section::None:
          violations.push_back(at + "key outside any section");
          break;
      }
    } catch (const std::exception& e) {
      violations.push_back(at + "cannot parse value for " + key + ": " +
                           e.what());
    }
  }
  flushScenario();

  validateConfig(config, &violations);
  if (!violations.empty()) {
    std::string msg = "configuration invalid:";
    for (const std::string& v : violations) msg += "\n  - " + v;
    throw ConfigError(msg);
  }
  return config;
}

ExperimentConfig parseConfig(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open configuration file " + path);
  std::ostringstream oss;
  oss << file.rdbuf();
  return parseConfigText(oss.str(), path);
}

std::string writeConfig(const ExperimentConfig& config) {
  std::ostringstream oss;
  oss << "[experiment]\n";
  oss << "name = " << config.name << "\n";
  oss << "jobs = " << config.jobs << "\n";
  for (const Scenario& sc : config.scenarios) {
    oss << "\n[scenario " << sc.name << "]\n";
    for (const FieldDef& f : scenarioFields()) {
      oss << f.key << " = " << f.get(sc) << "\n";
    }
  }
  if (config.sweep.enabled) {
    oss << "\n[sweep]\n";
    oss << "scenario = " << config.sweep.scenario << "\n";
    oss << "force_grid_n =";
    for (double f : config.sweep.forceGrid) oss << ' ' << formatDouble(f);
    oss << "\n";
  }
  return oss.str();
}

void applyScenarioOverride(ExperimentConfig* config,
                           const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override must be key=value: " + assignment);
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  const FieldDef* field = findField(key);
  if (field == nullptr) throw ConfigError("unknown scenario key " + key);
  for (Scenario& sc : config->scenarios) {
    try {
      field->set(sc, value);
    } catch (const std::exception& e) {
      throw ConfigError("cannot parse override " + assignment + ": " + e.what());
    }
  }
}

std::string scenarioDefaultsTable() {
  Scenario quad;
  quad.applyModelDefaults();
  std::ostringstream oss;
  for (const FieldDef& f : scenarioFields()) {
    oss << "  " << f.key << " = " << f.get(quad) << "\n      " << f.description
        << "\n";
  }
  return oss.str();
}

}  // namespace aclfmpc
