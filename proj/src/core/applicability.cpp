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

#include "helm/core/applicability.hpp"

#include <fstream>

#include <json.hpp>

#include "helm/core/errors.hpp"

namespace helm {

bool has_clarification_turn(const Transcript& transcript) {
  for (const auto& turn : transcript.turns) {
    if (turn.role == Role::kSystem &&
        turn.text.find('?') != std::string::npos) {
      return true;
    }
  }
  return false;
}

bool is_applicable(ConstructId construct, const Scenario& scenario,
                   const Transcript* transcript,
                   const ApplicabilityConfig& config) {
  if (auto it = config.excluded.find(scenario.category);
      it != config.excluded.end() && it->second.contains(construct)) {
    return false;
  }
  if (construct == ConstructId::ICQ && config.icq_requires_clarification) {
    const bool ambiguous = scenario.requirement_tags.empty();
    const bool clarified =
        transcript != nullptr && has_clarification_turn(*transcript);
    return ambiguous || clarified;
  }
  return true;
}

std::vector<ConstructId> applicable_constructs(
    const Scenario& scenario, const Transcript* transcript,
    const ApplicabilityConfig& config) {
  std::vector<ConstructId> out;
  for (const auto& row : construct_table()) {
    if (is_applicable(row.id, scenario, transcript, config)) {
      out.push_back(row.id);
    }
  }
  return out;
}

ApplicabilityConfig load_applicability(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open applicability config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError({{path.string(), std::nullopt, e.what()}});
  }

  std::vector<Violation> violations;
  ApplicabilityConfig config;
  if (doc.contains("icq_requires_clarification")) {
    if (!doc["icq_requires_clarification"].is_boolean()) {
      violations.push_back({path.string(), std::nullopt,
                            "icq_requires_clarification must be a boolean"});
    } else {
      config.icq_requires_clarification =
          doc["icq_requires_clarification"].get<bool>();
    }
  }
  if (doc.contains("excluded")) {
    for (const auto& [cat_name, codes] : doc["excluded"].items()) {
      auto category = parse_category(cat_name);
      if (!category) {
        violations.push_back({path.string(), std::nullopt,
                              "unknown scenario category '" + cat_name + "'"});
        continue;
      }
      if (!codes.is_array()) {
        violations.push_back({path.string(), std::nullopt,
                              "excluded." + cat_name + " must be an array"});
        continue;
      }
      for (const auto& code : codes) {
        auto id = code.is_string() ? parse_construct(code.get<std::string>())
                                   : std::nullopt;
        if (!id) {
          violations.push_back({path.string(), std::nullopt,
                                "unknown construct " + code.dump() +
                                    " in excluded." + cat_name});
          continue;
        }
        config.excluded[*category].insert(*id);
      }
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return config;
}

}  // namespace helm
