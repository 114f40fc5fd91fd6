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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "helm/core/constructs.hpp"

namespace helm {

enum class DomainKind { kMovies, kBooks, kRestaurants, kOther };

// movies / books / restaurants, or any other label.
struct Domain {
  DomainKind kind = DomainKind::kOther;
  std::string label;  // set only for kOther

  static Domain parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const Domain&, const Domain&) = default;
  friend auto operator<=>(const Domain& a, const Domain& b) {
    return a.to_string() <=> b.to_string();
  }
};

enum class ScenarioCategory {
  kColdStart,
  kPreferenceRefinement,
  kContextual,
  kExploratory,
  kComparison,
};

inline constexpr int kNumCategories = 5;

std::string_view to_string(ScenarioCategory c);
std::optional<ScenarioCategory> parse_category(std::string_view text);

// Values are stored normalized (see normalize_value).
using AttributeMap = std::map<std::string, std::vector<std::string>>;

struct ItemRecord {
  std::string item_id;
  Domain domain;
  std::string title;
  AttributeMap attributes;
  std::optional<int> popularity_rank;

  friend bool operator==(const ItemRecord&, const ItemRecord&) = default;
};

using Catalog = std::map<std::string, ItemRecord>;

struct RequirementTag {
  std::string attribute;
  std::string value;

  friend bool operator==(const RequirementTag&, const RequirementTag&) = default;
};

struct Scenario {
  std::string scenario_id;
  Domain domain;
  ScenarioCategory category = ScenarioCategory::kColdStart;
  std::string user_profile;
  std::vector<std::string> interaction_history;
  std::vector<RequirementTag> requirement_tags;
  std::string rubric;
  bool calibration = false;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class Role { kUser, kSystem };

std::string_view to_string(Role r);

struct Turn {
  Role role = Role::kUser;
  std::string text;
  std::optional<std::string> embedding_ref;

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct RecommendationEntry {
  std::string item_id;
  int rank = 1;
  std::optional<std::string> explanation;
  std::optional<std::string> explanation_embedding_ref;

  friend bool operator==(const RecommendationEntry&,
                         const RecommendationEntry&) = default;
};

struct Transcript {
  std::string scenario_id;
  std::string system_id;
  std::vector<Turn> turns;
  std::vector<RecommendationEntry> recommendations;  // sorted by rank

  // Item ids of the first k recommendations.
  std::vector<std::string> top_k(std::size_t k) const;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

struct RatingRecord {
  std::string evaluator_id;
  std::string scenario_id;
  std::string system_id;
  ConstructId construct = ConstructId::EIS;
  int value = 3;
  std::int64_t timestamp_ms = 0;  // UTC
  std::string session_id;

  friend bool operator==(const RatingRecord&, const RatingRecord&) = default;
};

// (evaluator, scenario, system, construct): the uniqueness key of a rating.
using RatingKey = std::tuple<std::string, std::string, std::string, ConstructId>;

inline RatingKey key_of(const RatingRecord& r) {
  return {r.evaluator_id, r.scenario_id, r.system_id, r.construct};
}

struct RelevanceJudgment {
  std::string scenario_id;
  std::vector<std::string> relevant;

  friend bool operator==(const RelevanceJudgment&,
                         const RelevanceJudgment&) = default;
};

struct ParaphraseSet {
  std::string query_id;
  std::string original;                 // embedding key
  std::vector<std::string> paraphrases;  // embedding keys
  std::optional<std::string> system_id;

  friend bool operator==(const ParaphraseSet&, const ParaphraseSet&) = default;
};

}  // namespace helm
