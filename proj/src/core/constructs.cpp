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

#include "helm/core/constructs.hpp"

#include <stdexcept>

namespace helm {

namespace {

using D = Dimension;
using C = ConstructId;

constexpr std::array<ConstructSchema, kNumConstructs> kTable = {{
    {C::EIS, "EIS", D::kIntent, "Explicit Intent Satisfaction",
     "Recommendations honour the requirements and constraints the user stated."},
    {C::IIR, "IIR", D::kIntent, "Implicit Intent Recognition",
     "The system picks up on preferences that were implied by context but never spelled out."},
    {C::ICQ, "ICQ", D::kIntent, "Intent Clarification Quality",
     "Clarifying questions, when the request is ambiguous, are relevant, non-redundant and natural."},
    {C::GCS, "GCS", D::kIntent, "Goal Completion Support",
     "Recommendations move the user towards the goal behind the request."},
    {C::INF, "INF", D::kExplanation, "Informativeness",
     "Explanations carry information that matters for the decision."},
    {C::PER, "PER", D::kExplanation, "Personalization",
     "Explanations refer to this user's preferences and situation."},
    {C::FAI, "FAI", D::kExplanation, "Faithfulness",
     "Explanations describe the item and the rationale accurately, with no invented facts."},
    {C::ACT, "ACT", D::kExplanation, "Actionability",
     "Explanations make it easy to accept, reject or refine the recommendation."},
    {C::COH, "COH", D::kInteraction, "Dialogue Coherence",
     "Each response follows logically from the earlier turns."},
    {C::FLU, "FLU", D::kInteraction, "Language Fluency",
     "Responses read as grammatical, natural language."},
    {C::VER, "VER", D::kInteraction, "Appropriate Verbosity",
     "Response length suits the query."},
    {C::ADA, "ADA", D::kInteraction, "Conversational Adaptability",
     "Tone and style track the way the user communicates."},
    {C::UNC, "UNC", D::kTrust, "Uncertainty Communication",
     "Confidence and limits of the recommendation are expressed where warranted."},
    {C::CON, "CON", D::kTrust, "Behavioral Consistency",
     "Similar requests receive consistent answers."},
    {C::ATR, "ATR", D::kTrust, "Source Attribution",
     "Sources of information are named when that is appropriate."},
    {C::LIM, "LIM", D::kTrust, "Limitation Acknowledgment",
     "The system says so when it cannot serve the request well."},
    {C::DEM, "DEM", D::kFairness, "Demographic Parity",
     "Quality and relevance do not depend on the user's demographic group."},
    {C::POP, "POP", D::kFairness, "Popularity Debiasing",
     "Popular items are not over-represented."},
    {C::PRO, "PRO", D::kFairness, "Provider Fairness",
     "Items and their providers get a fair chance at exposure."},
    {C::DIV, "DIV", D::kFairness, "Diversity Maintenance",
     "The list spans varied categories and perspectives."},
}};

constexpr std::array<std::string_view, 5> kAnchors = {
    "1 - Strongly Disagree / Very Poor",
    "2 - Disagree / Poor",
    "3 - Neutral / Adequate",
    "4 - Agree / Good",
    "5 - Strongly Agree / Excellent",
};

constexpr std::array<std::string_view, 5> kAnchorDescriptions = {
    "The system completely fails on this dimension.",
    "The system shows major deficiencies.",
    "The system meets minimum expectations.",
    "The system performs well with minor issues.",
    "The system excels on this dimension.",
};

constexpr std::array<std::string_view, kNumDimensions> kDimensionIds = {
    "intent", "explanation", "interaction", "trust", "fairness"};

constexpr std::array<std::string_view, kNumDimensions> kDimensionLabels = {
    "Intent Alignment", "Explanation Quality", "Interaction Naturalness",
    "Trust & Transparency", "Fairness & Diversity"};

}  // namespace

std::span<const ConstructSchema, kNumConstructs> construct_table() {
  return kTable;
}

const ConstructSchema& schema_of(ConstructId id) {
  return kTable[static_cast<std::size_t>(id)];
}

Dimension dimension_of(ConstructId id) { return schema_of(id).dimension; }

std::array<ConstructId, 4> constructs_of(Dimension d) {
  const int base = static_cast<int>(d) * 4;
  return {static_cast<ConstructId>(base), static_cast<ConstructId>(base + 1),
          static_cast<ConstructId>(base + 2),
          static_cast<ConstructId>(base + 3)};
}

std::string_view to_string(ConstructId id) { return schema_of(id).code; }

std::optional<ConstructId> parse_construct(std::string_view code) {
  for (const auto& row : kTable) {
    if (row.code == code) return row.id;
  }
  return std::nullopt;
}

std::string_view to_string(Dimension d) {
  return kDimensionIds[static_cast<std::size_t>(d)];
}

std::string_view dimension_label(Dimension d) {
  return kDimensionLabels[static_cast<std::size_t>(d)];
}

std::optional<Dimension> parse_dimension(std::string_view id) {
  for (std::size_t i = 0; i < kDimensionIds.size(); ++i) {
    if (kDimensionIds[i] == id) return static_cast<Dimension>(i);
  }
  return std::nullopt;
}

std::string_view anchor_text(int value) {
  if (value < kLikertMin || value > kLikertMax) {
    throw std::out_of_range("Likert value out of range: " +
                            std::to_string(value));
  }
  return kAnchors[static_cast<std::size_t>(value - 1)];
}

std::string_view anchor_description(int value) {
  if (value < kLikertMin || value > kLikertMax) {
    throw std::out_of_range("Likert value out of range: " +
                            std::to_string(value));
  }
  return kAnchorDescriptions[static_cast<std::size_t>(value - 1)];
}

}  // namespace helm
