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

namespace aclfmpc {

enum class ControllerVariant {
  AclfMpc,
  AclfMpcNoTerminal,
  ClfMpcNoAdaptation,
  PerfectModelMpc,
  PerfectModelMpcNoTerminal,
  NominalMpc,
  MomentumObserverMpc,
};

/// Feature switches implied by a variant.
struct ControllerOptions {
  bool clfConstraint = false;
  bool adaptation = false;
  bool terminalCost = false;
  bool perfectModel = false;
  bool momentumObserver = false;
};

ControllerOptions optionsForVariant(ControllerVariant variant);

std::string variantName(ControllerVariant variant);
ControllerVariant variantFromName(const std::string& name);  // throws on unknown
const std::vector<ControllerVariant>& allVariants();

}  // namespace aclfmpc
