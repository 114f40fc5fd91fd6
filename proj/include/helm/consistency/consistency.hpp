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

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "helm/core/embeddings.hpp"
#include "helm/core/types.hpp"

namespace helm::consistency {

// Mean cosine between the original response embedding and each paraphrase
// response embedding. Throws std::out_of_range on an unresolved key and
// std::invalid_argument on an empty paraphrase list or zero-norm vector.
double response_consistency(const ParaphraseSet& set,
                            const EmbeddingTable& embeddings);

struct ConsistencySummary {
  std::vector<std::pair<std::string, double>> per_set;  // (query_id, score)
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// nullopt for an empty input.
std::optional<ConsistencySummary> system_consistency(
    std::span<const ParaphraseSet> sets, const EmbeddingTable& embeddings);

}  // namespace helm::consistency
