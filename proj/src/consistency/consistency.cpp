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

#include "helm/consistency/consistency.hpp"

#include <algorithm>
#include <stdexcept>

namespace helm::consistency {

double response_consistency(const ParaphraseSet& set,
                            const EmbeddingTable& embeddings) {
  if (set.paraphrases.empty()) {
    throw std::invalid_argument("paraphrase set '" + set.query_id +
                                "' has no paraphrases");
  }
  const auto original = embeddings.at(set.original);
  double sum = 0.0;
  for (const auto& key : set.paraphrases) {
    sum += cosine(original, embeddings.at(key));
  }
  return sum / static_cast<double>(set.paraphrases.size());
}

std::optional<ConsistencySummary> system_consistency(
    std::span<const ParaphraseSet> sets, const EmbeddingTable& embeddings) {
  if (sets.empty()) return std::nullopt;
  ConsistencySummary out;
  double sum = 0.0;
  for (const auto& s : sets) {
    const double score = response_consistency(s, embeddings);
    out.per_set.emplace_back(s.query_id, score);
    sum += score;
  }
  auto [lo, hi] = std::minmax_element(
      out.per_set.begin(), out.per_set.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  out.min = lo->second;
  out.max = hi->second;
  out.mean = sum / static_cast<double>(sets.size());
  return out;
}

}  // namespace helm::consistency
