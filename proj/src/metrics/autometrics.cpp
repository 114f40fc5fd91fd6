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

#include "helm/metrics/autometrics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "helm/core/errors.hpp"
#include "helm/core/text.hpp"

namespace helm::metrics {

ExposureProfile build_exposure(std::span<const Transcript* const> transcripts,
                               std::size_t k, std::size_t catalog_size) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  ExposureProfile profile;
  profile.catalog_size = catalog_size;
  for (const Transcript* t : transcripts) {
    for (const auto& id : t->top_k(k)) ++profile.counts[id];
  }
  if (profile.counts.size() > catalog_size) {
    throw std::invalid_argument(
        "exposure profile has more distinct items than the catalog");
  }
  return profile;
}

double gini(std::span<const double> counts) {
  const std::size_t n = counts.size();
  if (n == 0) throw UndefinedMetricError("gini: empty count vector");
  std::vector<double> x(counts.begin(), counts.end());
  for (double v : x) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw std::invalid_argument("gini: counts must be finite and nonnegative");
    }
  }
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  if (total <= 0.0) throw UndefinedMetricError("gini: total count is zero");
  std::sort(x.begin(), x.end());
  // Sorted-order identity for the mean absolute difference:
  //   sum_i sum_j |x_i - x_j| = 2 sum_i (2i - n - 1) x_(i), i = 1..n.
  double weighted = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    weighted += (2.0 * static_cast<double>(i + 1) - static_cast<double>(n) - 1.0) * x[i];
  }
  return weighted / (static_cast<double>(n) * total);
}

double gini(const ExposureProfile& profile) {
  if (profile.catalog_size == 0) {
    throw std::invalid_argument("gini: catalog_size must be positive");
  }
  if (profile.counts.size() > profile.catalog_size) {
    throw std::invalid_argument(
        "gini: catalog_size smaller than the number of counted items");
  }
  std::vector<double> x(profile.catalog_size, 0.0);
  std::size_t i = 0;
  for (const auto& [_, c] : profile.counts) {
    if (c < 0) throw std::invalid_argument("gini: negative count");
    x[i++] = static_cast<double>(c);
  }
  return gini(std::span<const double>(x));
}

double coverage_at_k(std::span<const RankedList> lists, std::size_t k,
                     std::size_t catalog_size) {
  if (k == 0) throw std::invalid_argument("coverage_at_k: k must be >= 1");
  if (catalog_size == 0) {
    throw std::invalid_argument("coverage_at_k: catalog_size must be positive");
  }
  if (lists.empty()) throw UndefinedMetricError("coverage_at_k: no lists");
  std::set<std::string> seen;
  for (const auto& list : lists) {
    const std::size_t n = std::min(k, list.size());
    seen.insert(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(n));
  }
  if (seen.size() > catalog_size) {
    throw std::invalid_argument(
        "coverage_at_k: more distinct items than catalog_size");
  }
  return static_cast<double>(seen.size()) / static_cast<double>(catalog_size);
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

ItemSimilarity jaccard_similarity(const Catalog& catalog) {
  auto features = std::make_shared<std::map<std::string, std::set<std::string>>>();
  for (const auto& [id, item] : catalog) {
    auto& set = (*features)[id];
    for (const auto& [name, values] : item.attributes) {
      for (const auto& v : values) set.insert(name + '\x1f' + v);
    }
  }
  return [features](const std::string& a, const std::string& b) {
    auto ia = features->find(a);
    auto ib = features->find(b);
    if (ia == features->end()) throw std::out_of_range("unknown item '" + a + "'");
    if (ib == features->end()) throw std::out_of_range("unknown item '" + b + "'");
    return jaccard(ia->second, ib->second);
  };
}

ItemSimilarity cosine_similarity(const EmbeddingTable& item_vectors) {
  return [&item_vectors](const std::string& a, const std::string& b) {
    return cosine(item_vectors.at(a), item_vectors.at(b));
  };
}

double intra_list_diversity(std::span<const std::string> list,
                            const ItemSimilarity& similarity) {
  if (list.size() < 2) {
    throw UndefinedMetricError("intra_list_diversity: list has fewer than 2 items");
  }
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < list.size(); ++i) {
    for (std::size_t j = i + 1; j < list.size(); ++j) {
      sum += 1.0 - similarity(list[i], list[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

Judgments index_judgments(std::span<const RelevanceJudgment> judgments) {
  Judgments out;
  for (const auto& j : judgments) {
    out[j.scenario_id].insert(j.relevant.begin(), j.relevant.end());
  }
  return out;
}

double hit_at_k(const RankedList& list, const std::set<std::string>& relevant,
                std::size_t k) {
  const std::size_t n = std::min(k, list.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (relevant.contains(list[i])) return 1.0;
  }
  return 0.0;
}

double ndcg_single(const RankedList& list, const std::set<std::string>& relevant,
                   std::size_t k) {
  if (relevant.empty()) throw UndefinedMetricError("ndcg: empty relevant set");
  const std::size_t n = std::min(k, list.size());
  std::set<std::string> credited;
  double dcg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (relevant.contains(list[i]) && credited.insert(list[i]).second) {
      dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }
  }
  double idcg = 0.0;
  const std::size_t ideal = std::min(k, relevant.size());
  for (std::size_t i = 0; i < ideal; ++i) {
    idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg / idcg;
}

namespace {

template <typename PerList>
double average_over_lists(std::span<const ScenarioList> lists,
                          const Judgments& judgments, std::size_t k,
                          const char* name, PerList&& per_list) {
  if (k == 0) throw std::invalid_argument(std::string(name) + ": k must be >= 1");
  if (lists.empty()) throw UndefinedMetricError(std::string(name) + ": no lists");
  std::vector<std::string> missing;
  for (const auto& l : lists) {
    if (!judgments.contains(l.scenario_id)) missing.push_back(l.scenario_id);
  }
  if (!missing.empty()) {
    std::string msg = std::string(name) + ": no relevance judgment for scenario";
    for (const auto& id : missing) msg += " '" + id + "'";
    throw std::invalid_argument(msg);
  }
  double sum = 0.0;
  for (const auto& l : lists) sum += per_list(l.items, judgments.at(l.scenario_id), k);
  return sum / static_cast<double>(lists.size());
}

}  // namespace

double hit_rate_at_k(std::span<const ScenarioList> lists,
                     const Judgments& judgments, std::size_t k) {
  return average_over_lists(lists, judgments, k, "hit_rate_at_k", hit_at_k);
}

double ndcg_at_k(std::span<const ScenarioList> lists, const Judgments& judgments,
                 std::size_t k) {
  return average_over_lists(lists, judgments, k, "ndcg_at_k", ndcg_single);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("pearson: length mismatch");
  }
  const std::size_t n = xs.size();
  if (n < 3) throw UndefinedMetricError("pearson: needs at least 3 pairs");
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedMetricError("pearson: zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> intent_coverage(const Scenario& scenario,
                                      const Transcript& transcript,
                                      const Catalog& catalog) {
  if (scenario.requirement_tags.empty()) return std::nullopt;
  std::vector<const ItemRecord*> items;
  for (const auto& r : transcript.recommendations) {
    auto it = catalog.find(r.item_id);
    if (it == catalog.end()) {
      throw std::out_of_range("intent_coverage: unknown item '" + r.item_id + "'");
    }
    items.push_back(&it->second);
  }
  std::size_t matched = 0;
  for (const auto& tag : scenario.requirement_tags) {
    const std::string attr = normalize_value(tag.attribute);
    const std::string value = normalize_value(tag.value);
    const bool hit = std::any_of(items.begin(), items.end(), [&](const ItemRecord* item) {
      auto a = item->attributes.find(attr);
      return a != item->attributes.end() &&
             std::find(a->second.begin(), a->second.end(), value) != a->second.end();
    });
    if (hit) ++matched;
  }
  return static_cast<double>(matched) /
         static_cast<double>(scenario.requirement_tags.size());
}

double dialogue_coherence(const Transcript& transcript,
                          const EmbeddingTable& embeddings) {
  const auto& turns = transcript.turns;
  if (turns.size() < 2) {
    throw UndefinedMetricError("dialogue_coherence: fewer than 2 turns");
  }
  for (std::size_t i = 0; i < turns.size(); ++i) {
    if (!turns[i].embedding_ref) {
      throw std::invalid_argument("dialogue_coherence: turn " + std::to_string(i) +
                                  " of (" + transcript.scenario_id + ", " +
                                  transcript.system_id + ") has no embedding_ref");
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < turns.size(); ++i) {
    sum += cosine(embeddings.at(*turns[i].embedding_ref),
                  embeddings.at(*turns[i + 1].embedding_ref));
  }
  return sum / static_cast<double>(turns.size() - 1);
}

std::map<std::string, VerbositySummary> verbosity_stats(
    std::span<const Transcript> transcripts) {
  std::map<std::string, std::vector<std::size_t>> lengths;
  for (const auto& t : transcripts) {
    for (const auto& turn : t.turns) {
      if (turn.role == Role::kSystem) lengths[t.system_id].push_back(word_count(turn.text));
    }
  }
  std::map<std::string, VerbositySummary> out;
  for (auto& [system, v] : lengths) {
    std::sort(v.begin(), v.end());
    VerbositySummary s;
    s.turns = v.size();
    s.mean = static_cast<double>(std::accumulate(v.begin(), v.end(), std::size_t{0})) /
             static_cast<double>(v.size());
    const std::size_t mid = v.size() / 2;
    s.median = v.size() % 2 == 1
                   ? static_cast<double>(v[mid])
                   : (static_cast<double>(v[mid - 1]) + static_cast<double>(v[mid])) / 2.0;
    s.max = v.back();
    out.emplace(system, s);
  }
  return out;
}

}  // namespace helm::metrics
