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

// Automated list, accuracy and dialogue metrics computed from transcripts.
//
// All functions are pure. Inputs for which a metric is undefined raise
// UndefinedMetricError; callers that report tables convert that to null.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "helm/core/embeddings.hpp"
#include "helm/core/types.hpp"

namespace helm::metrics {

// ---- exposure / popularity bias ----

// Recommendation counts of one system over all evaluated scenarios, top-K
// truncated. Items absent from `counts` have count zero.
struct ExposureProfile {
  std::map<std::string, std::int64_t> counts;
  std::size_t catalog_size = 0;
};

// Tallies the top-k items of every transcript. Throws std::invalid_argument if
// a transcript recommends more distinct items than `catalog_size`.
ExposureProfile build_exposure(std::span<const Transcript* const> transcripts,
                               std::size_t k, std::size_t catalog_size);

// Gini coefficient over the full catalog vector, zero-count items included:
//   G = sum_i sum_j |x_i - x_j| / (2 n^2 mean(x)),  n = catalog_size.
// Lies in [0, 1). Throws UndefinedMetricError when every count is zero.
double gini(const ExposureProfile& profile);

// Same statistic over an explicit count vector (n = counts.size()).
double gini(std::span<const double> counts);

// ---- catalog coverage ----

using RankedList = std::vector<std::string>;

// |union of every list's top-k| / catalog_size.
double coverage_at_k(std::span<const RankedList> lists, std::size_t k,
                     std::size_t catalog_size);

// ---- intra-list diversity ----

using ItemSimilarity =
    std::function<double(const std::string&, const std::string&)>;

// Jaccard over the items' (attribute, value) pair sets.
ItemSimilarity jaccard_similarity(const Catalog& catalog);
// Cosine over item feature vectors keyed by item_id.
ItemSimilarity cosine_similarity(const EmbeddingTable& item_vectors);

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

// Mean over unordered pairs of (1 - similarity). Needs at least two items.
double intra_list_diversity(std::span<const std::string> list,
                            const ItemSimilarity& similarity);

// ---- accuracy ----

struct ScenarioList {
  std::string scenario_id;
  RankedList items;  // rank order
};

using Judgments = std::map<std::string, std::set<std::string>>;

Judgments index_judgments(std::span<const RelevanceJudgment> judgments);

// Per-list contributions, exposed for the per-scenario correlation analysis.
double hit_at_k(const RankedList& list, const std::set<std::string>& relevant,
                std::size_t k);
double ndcg_single(const RankedList& list, const std::set<std::string>& relevant,
                   std::size_t k);

// Fraction of lists whose top-k contains a relevant item. Throws
// std::invalid_argument naming any scenario without a judgment.
double hit_rate_at_k(std::span<const ScenarioList> lists,
                     const Judgments& judgments, std::size_t k);

// Binary-relevance NDCG with 1/log2(rank + 1) discount, averaged over lists.
double ndcg_at_k(std::span<const ScenarioList> lists, const Judgments& judgments,
                 std::size_t k);

// ---- correlation ----

// Sample Pearson correlation. Needs equal lengths >= 3 and nonzero variance
// on both sides.
double pearson(std::span<const double> xs, std::span<const double> ys);

// ---- dialogue-level ----

// Fraction of the scenario's requirement tags matched by at least one
// recommended item. nullopt when the scenario states no requirements.
std::optional<double> intent_coverage(const Scenario& scenario,
                                      const Transcript& transcript,
                                      const Catalog& catalog);

// Mean cosine over adjacent turn pairs. Every turn needs an embedding ref.
double dialogue_coherence(const Transcript& transcript,
                          const EmbeddingTable& embeddings);

struct VerbositySummary {
  std::size_t turns = 0;
  double mean = 0.0;
  double median = 0.0;
  std::size_t max = 0;
};

// Word counts over system turns, grouped by system_id. Systems with no system
// turns are omitted.
std::map<std::string, VerbositySummary> verbosity_stats(
    std::span<const Transcript> transcripts);

}  // namespace helm::metrics
