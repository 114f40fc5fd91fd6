// Copyright 2026 The HELM Eval Authors.
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

#include <filesystem>
#include <map>
#include <set>
#include <vector>

#include "helm/core/constructs.hpp"
#include "helm/core/types.hpp"

namespace helm {

// Which constructs a rater is asked about for a given scenario. Every
// construct applies unless the scenario's category masks it; ICQ additionally
// requires either a clarifying system turn or an ambiguous scenario (one with
// no stated requirement tags) unless `icq_requires_clarification` is off.
struct ApplicabilityConfig {
  std::map<ScenarioCategory, std::set<ConstructId>> excluded;
  bool icq_requires_clarification = true;
};

// A system turn containing a question mark.
bool has_clarification_turn(const Transcript& transcript);

// Sorted by ConstructId. `transcript` may be null when only the scenario is
// known; ICQ is then decided on the scenario alone.
std::vector<ConstructId> applicable_constructs(const Scenario& scenario,
                                               const Transcript* transcript,
                                               const ApplicabilityConfig& config);

bool is_applicable(ConstructId construct, const Scenario& scenario,
                   const Transcript* transcript,
                   const ApplicabilityConfig& config);

// JSON: {"excluded": {"<category>": ["ICQ", ...]}, "icq_requires_clarification": true}
ApplicabilityConfig load_applicability(const std::filesystem::path& path);

}  // namespace helm
