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

#include "helm/core/types.hpp"

#include <algorithm>
#include <array>

namespace helm {

namespace {

constexpr std::array<std::string_view, kNumCategories> kCategoryNames = {
    "cold_start", "preference_refinement", "contextual", "exploratory",
    "comparison"};

}  // namespace

Domain Domain::parse(std::string_view text) {
  if (text == "movies") return {DomainKind::kMovies, {}};
  if (text == "books") return {DomainKind::kBooks, {}};
  if (text == "restaurants") return {DomainKind::kRestaurants, {}};
  return {DomainKind::kOther, std::string(text)};
}

std::string Domain::to_string() const {
  switch (kind) {
    case DomainKind::kMovies:
      return "movies";
    case DomainKind::kBooks:
      return "books";
    case DomainKind::kRestaurants:
      return "restaurants";
    case DomainKind::kOther:
      break;
  }
  return label;
}

std::string_view to_string(ScenarioCategory c) {
  return kCategoryNames[static_cast<std::size_t>(c)];
}

std::optional<ScenarioCategory> parse_category(std::string_view text) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == text) return static_cast<ScenarioCategory>(i);
  }
  return std::nullopt;
}

std::string_view to_string(Role r) {
  return r == Role::kUser ? "user" : "system";
}

std::vector<std::string> Transcript::top_k(std::size_t k) const {
  std::vector<std::string> out;
  out.reserve(std::min(k, recommendations.size()));
  for (const auto& entry : recommendations) {
    if (out.size() == k) break;
    out.push_back(entry.item_id);
  }
  return out;
}

}  // namespace helm
