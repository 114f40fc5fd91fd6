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

// Likert aggregation: construct means -> dimension scores -> Human-Centered
// Score (geometric mean of the five dimension scores, raw 1..5 scale).
//
// Aggregates are independent of record order: records are grouped into sorted
// containers and integer rating sums are formed before any division.

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "helm/core/constructs.hpp"
#include "helm/core/types.hpp"

namespace helm::scoring {

// Mean of scenario-level means (each scenario weighs 1 regardless of how many
// raters saw it). Expects ratings already filtered to one construct and one
// system. nullopt on empty input.
std::optional<double> construct_mean(std::span<const RatingRecord> ratings);

// Arithmetic mean of the applicable (non-null) construct means of one
// dimension. nullopt when every construct is inapplicable.
std::optional<double> dimension_score(
    std::span<const std::optional<double>> construct_means);

// Geometric mean of the five dimension scores. Throws std::invalid_argument
// unless exactly five strictly positive scores are given.
double hcs(std::span<const double> dimension_scores);

struct DimensionScore {
  Dimension dimension = Dimension::kIntent;
  double score = 0.0;
  double std = 0.0;  // sample std over scenario-level dimension means
  std::size_t n_ratings = 0;
  std::size_t n_scenarios = 0;
};

struct SystemScores {
  std::string system_id;
  std::array<std::optional<double>, kNumConstructs> construct_means;
  std::array<std::optional<DimensionScore>, kNumDimensions> dimensions;
  std::optional<double> hcs;
  std::vector<std::string> diagnostics;
};

// One entry per system, sorted by system_id.
std::vector<SystemScores> score_systems(std::span<const RatingRecord> ratings);

// HCS per (scenario_id, system_id) for every pair whose ratings cover all five
// dimensions.
std::map<std::pair<std::string, std::string>, double> scenario_hcs(
    std::span<const RatingRecord> ratings);

}  // namespace helm::scoring
