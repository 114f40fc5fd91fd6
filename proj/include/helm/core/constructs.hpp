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

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace helm {

enum class Dimension : int {
  kIntent = 0,
  kExplanation,
  kInteraction,
  kTrust,
  kFairness,
};

inline constexpr std::size_t kNumDimensions = 5;
inline constexpr std::array<Dimension, kNumDimensions> kAllDimensions = {
    Dimension::kIntent, Dimension::kExplanation, Dimension::kInteraction,
    Dimension::kTrust, Dimension::kFairness};

// Ordered so that the four constructs of each dimension are contiguous.
enum class ConstructId : int {
  EIS = 0, IIR, ICQ, GCS,  // intent
  INF, PER, FAI, ACT,      // explanation
  COH, FLU, VER, ADA,      // interaction
  UNC, CON, ATR, LIM,      // trust
  DEM, POP, PRO, DIV,      // fairness
};

inline constexpr std::size_t kNumConstructs = 20;
inline constexpr int kLikertMin = 1;
inline constexpr int kLikertMax = 5;

struct ConstructSchema {
  ConstructId id;
  std::string_view code;
  Dimension dimension;
  std::string_view label;
  std::string_view definition;
};

// Full table of the twenty constructs, indexed by ConstructId.
std::span<const ConstructSchema, kNumConstructs> construct_table();

const ConstructSchema& schema_of(ConstructId id);
Dimension dimension_of(ConstructId id);
std::array<ConstructId, 4> constructs_of(Dimension d);

std::string_view to_string(ConstructId id);
std::optional<ConstructId> parse_construct(std::string_view code);

// Short ids used in file formats and reports: intent, explanation, ...
std::string_view to_string(Dimension d);
std::string_view dimension_label(Dimension d);
std::optional<Dimension> parse_dimension(std::string_view id);

// Anchor text for one Likert point, e.g. "1 - Strongly Disagree / Very Poor".
// Shared by every construct.
std::string_view anchor_text(int value);
std::string_view anchor_description(int value);

}  // namespace helm
