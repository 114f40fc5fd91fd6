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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "helm/core/errors.hpp"
#include "helm/core/random.hpp"
#include "helm/metrics/autometrics.hpp"
#include "support/oracles.hpp"

namespace helm::metrics {
namespace {

Transcript recommends(const std::string& scenario, std::vector<std::string> items) {
  Transcript t;
  t.scenario_id = scenario;
  t.system_id = "sys";
  int rank = 1;
  for (auto& id : items) t.recommendations.push_back({std::move(id), rank++, {}, {}});
  return t;
}

// ---- gini ----

TEST(Gini, SpecExamples) {
  EXPECT_DOUBLE_EQ(gini(std::vector<double>{9, 0, 0, 0}), 0.75);
  EXPECT_EQ(gini(std::vector<double>{1, 1, 1, 1}), 0.0);
  EXPECT_NEAR(gini(std::vector<double>{1, 2, 3, 4}), 0.25, 1e-15);
}

TEST(Gini, ZeroTotalIsUndefined) {
  EXPECT_THROW(gini(std::vector<double>{0, 0, 0}), UndefinedMetricError);
  EXPECT_THROW(gini(std::vector<double>{}), UndefinedMetricError);
  EXPECT_THROW(gini(std::vector<double>{1, -1}), std::invalid_argument);
}

TEST(Gini, ProfileCountsUnrecommendedItems) {
  // Always recommending item A over a 4-item catalog.
  std::vector<Transcript> ts;
  for (int s = 0; s < 5; ++s) ts.push_back(recommends("s" + std::to_string(s), {"A"}));
  std::vector<const Transcript*> ptrs;
  std::vector<RankedList> lists;
  for (const auto& t : ts) {
    ptrs.push_back(&t);
    lists.push_back(t.top_k(1));
  }
  const auto profile = build_exposure(ptrs, 1, 4);
  EXPECT_EQ(profile.counts.at("A"), 5);
  EXPECT_DOUBLE_EQ(gini(profile), 0.75);
  EXPECT_DOUBLE_EQ(coverage_at_k(lists, 1, 4), 0.25);
  EXPECT_THROW(intra_list_diversity(lists[0], [](auto&, auto&) { return 0.0; }),
               UndefinedMetricError);
}

TEST(Gini, ScaleInvariantAndMatchesOracle) {
  std::mt19937_64 rng(3);
  for (int c = 0; c < 500; ++c) {
    std::vector<double> x(uniform_index(rng, 12) + 1);
    for (auto& v : x) v = static_cast<double>(uniform_index(rng, 9));
    x[0] += 1.0;
    const double g = gini(x);
    EXPECT_NEAR(g, oracle::gini_double_sum(x), 1e-12);
    auto scaled = x;
    for (auto& v : scaled) v *= 7.0;
    EXPECT_NEAR(gini(scaled), g, 1e-12);
    EXPECT_GE(g, 0.0);
    EXPECT_LT(g, 1.0);
  }
}

// ---- coverage ----

TEST(Coverage, SpecExamples) {
  const std::vector<RankedList> lists = {{"a", "b", "c"}, {"c", "d", "e"}};
  EXPECT_DOUBLE_EQ(coverage_at_k(lists, 3, 10), 0.5);
  EXPECT_DOUBLE_EQ(coverage_at_k(std::vector<RankedList>{{"a", "b", "c"}}, 3, 3), 1.0);
  EXPECT_THROW(coverage_at_k(std::vector<RankedList>{}, 3, 10), UndefinedMetricError);
  EXPECT_THROW(coverage_at_k(lists, 0, 10), std::invalid_argument);
}

TEST(Coverage, MonotoneInK) {
  std::mt19937_64 rng(5);
  for (int c = 0; c < 100; ++c) {
    std::vector<RankedList> lists(uniform_index(rng, 5) + 1);
    for (auto& l : lists) {
      for (int i = 0; i < 6; ++i) l.push_back("i" + std::to_string(uniform_index(rng, 20)));
    }
    double prev = 0.0;
    for (std::size_t k = 1; k <= 7; ++k) {
      const double cov = coverage_at_k(lists, k, 20);
      EXPECT_GE(cov, prev);
      prev = cov;
    }
  }
}

// ---- ILD ----

Catalog tagged(const std::map<std::string, std::vector<std::string>>& tags) {
  Catalog c;
  for (const auto& [id, t] : tags) {
    ItemRecord r;
    r.item_id = id;
    r.domain = Domain::parse("movies");
    r.attributes["tag"] = t;
    c[id] = r;
  }
  return c;
}

TEST(Ild, SpecExamples) {
  const auto same = tagged({{"x", {"a", "b"}}, {"y", {"a", "b"}}});
  EXPECT_DOUBLE_EQ(intra_list_diversity(std::vector<std::string>{"x", "y"},
                                        jaccard_similarity(same)), 0.0);
  const auto disjoint = tagged({{"x", {"a"}}, {"y", {"b"}}});
  EXPECT_DOUBLE_EQ(intra_list_diversity(std::vector<std::string>{"x", "y"},
                                        jaccard_similarity(disjoint)), 1.0);
  const auto three = tagged({{"x", {"a", "b"}}, {"y", {"b", "c"}}, {"z", {"c", "d"}}});
  EXPECT_NEAR(intra_list_diversity(std::vector<std::string>{"x", "y", "z"},
                                   jaccard_similarity(three)),
              7.0 / 9.0, 1e-15);
}

TEST(Ild, PermutationInvariant) {
  const auto cat = tagged({{"p", {"a", "b"}}, {"q", {"b"}}, {"r", {"c", "a"}}, {"s", {"d"}}});
  const auto sim = jaccard_similarity(cat);
  std::vector<std::string> list = {"p", "q", "r", "s"};
  const double base = intra_list_diversity(list, sim);
  std::sort(list.begin(), list.end());
  do {
    EXPECT_NEAR(intra_list_diversity(list, sim), base, 1e-14);
  } while (std::next_permutation(list.begin(), list.end()));
}

TEST(Ild, CosineSimilarityOverItemVectors) {
  EmbeddingTable t;
  t.insert("x", {1.0, 0.0});
  t.insert("y", {0.0, 1.0});
  EXPECT_DOUBLE_EQ(intra_list_diversity(std::vector<std::string>{"x", "y"},
                                        cosine_similarity(t)), 1.0);
}

// ---- accuracy ----

TEST(HitRate, SpecExamples) {
  EXPECT_EQ(hit_at_k({"r", "b"}, {"r"}, 10), 1.0);
  EXPECT_EQ(hit_at_k({"a", "b", "r"}, {"r"}, 2), 0.0);
  const std::vector<ScenarioList> lists = {{"s1", {"r"}}, {"s2", {"x"}}, {"s3", {"r"}}};
  const Judgments j = {{"s1", {"r"}}, {"s2", {"r"}}, {"s3", {"r"}}};
  EXPECT_DOUBLE_EQ(hit_rate_at_k(lists, j, 10), 2.0 / 3.0);
}

TEST(HitRate, MissingJudgmentNamesScenario) {
  const std::vector<ScenarioList> lists = {{"s9", {"r"}}};
  try {
    hit_rate_at_k(lists, {}, 10);
    FAIL() << "expected an error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("s9"), std::string::npos);
  }
}

TEST(Ndcg, SpecExamples) {
  EXPECT_DOUBLE_EQ(ndcg_single({"r", "a"}, {"r"}, 10), 1.0);
  EXPECT_NEAR(ndcg_single({"a", "r"}, {"r"}, 10), 1.0 / std::log2(3.0), 1e-15);
  EXPECT_NEAR(ndcg_single({"a", "r"}, {"r"}, 10), 0.6309, 1e-4);
  EXPECT_EQ(ndcg_single({"a", "b"}, {"r"}, 10), 0.0);
}

TEST(Ndcg, DuplicateItemsCreditedOnce) {
  EXPECT_DOUBLE_EQ(ndcg_single({"r", "r"}, {"r", "q"}, 2),
                   1.0 / (1.0 + 1.0 / std::log2(3.0)));
}

// ---- pearson ----

TEST(Pearson, SpecExamples) {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> lin, neg;
  for (double v : x) {
    lin.push_back(2 * v + 1);
    neg.push_back(-v);
  }
  EXPECT_NEAR(pearson(x, lin), 1.0, 1e-15);
  EXPECT_NEAR(pearson(x, neg), -1.0, 1e-15);
  EXPECT_NEAR(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}), 0.5, 1e-15);
  EXPECT_THROW(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}),
               UndefinedMetricError);
}

TEST(Pearson, SignOfSlope) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int c = 0; c < 200; ++c) {
    std::vector<double> x(10), y(10), z(10);
    const double a = std::exp(g(rng)), b = g(rng);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = g(rng);
      y[i] = a * x[i] + b;
      z[i] = -a * x[i] + b;
    }
    EXPECT_NEAR(pearson(x, y), 1.0, 1e-12);
    EXPECT_NEAR(pearson(x, z), -1.0, 1e-12);
  }
}

// ---- dialogue-level ----

TEST(IntentCoverage, SpecExamples) {
  Catalog cat;
  cat["m1"] = {"m1", Domain::parse("movies"), "A", {{"genre", {"drama"}}, {"year", {"1999"}}}, {}};
  cat["m2"] = {"m2", Domain::parse("movies"), "B", {{"director", {"lee"}}}, {}};
  Scenario s;
  s.scenario_id = "s";
  s.requirement_tags = {{"genre", "Drama"}, {"year", "1999"}, {"director", "lee"},
                        {"language", "french"}};
  const auto t = recommends("s", {"m1", "m2"});
  EXPECT_DOUBLE_EQ(*intent_coverage(s, t, cat), 0.75);
  s.requirement_tags.pop_back();
  EXPECT_DOUBLE_EQ(*intent_coverage(s, t, cat), 1.0);
  s.requirement_tags.clear();
  EXPECT_FALSE(intent_coverage(s, t, cat).has_value());
}

TEST(Coherence, SpecExamples) {
  EmbeddingTable e;
  e.insert("a", {1.0, 0.0});
  e.insert("b", {0.0, 1.0});
  Transcript same, ortho;
  same.turns = {{Role::kUser, "x", "a"}, {Role::kSystem, "y", "a"}, {Role::kUser, "z", "a"}};
  ortho.turns = {{Role::kUser, "x", "a"}, {Role::kSystem, "y", "b"}};
  EXPECT_EQ(dialogue_coherence(same, e), 1.0);
  EXPECT_DOUBLE_EQ(dialogue_coherence(ortho, e), 0.0);
}

TEST(Coherence, MeanOfAdjacentCosines) {
  EmbeddingTable e;
  // cos(u, v) = 0.8 and cos(v, w) = 0.4.
  e.insert("u", {0.8, 0.6});
  e.insert("v", {1.0, 0.0});
  e.insert("w", {0.4, std::sqrt(1.0 - 0.16)});
  Transcript t;
  t.turns = {{Role::kUser, "1", "u"}, {Role::kSystem, "2", "v"}, {Role::kUser, "3", "w"}};
  EXPECT_NEAR(dialogue_coherence(t, e), 0.6, 1e-15);
  t.turns[1].embedding_ref.reset();
  try {
    dialogue_coherence(t, e);
    FAIL() << "expected an error";
  } catch (const std::invalid_argument& ex) {
    EXPECT_NE(std::string(ex.what()).find("turn 1"), std::string::npos);
  }
}

TEST(Verbosity, SpecExamples) {
  Transcript t;
  t.system_id = "s";
  t.turns = {{Role::kSystem, "one two three", {}}, {Role::kUser, "ignored words here", {}},
             {Role::kSystem, "a b c d e", {}}};
  auto v = verbosity_stats(std::vector<Transcript>{t});
  EXPECT_DOUBLE_EQ(v.at("s").mean, 4.0);

  Transcript quiet;
  quiet.system_id = "q";
  quiet.turns = {{Role::kUser, "hello", {}}};
  EXPECT_TRUE(verbosity_stats(std::vector<Transcript>{quiet}).empty());

  Transcript seven;
  seven.system_id = "z";
  seven.turns = {{Role::kSystem, "one two three four five six seven", {}}};
  const auto s = verbosity_stats(std::vector<Transcript>{seven}).at("z");
  EXPECT_EQ(s.mean, 7.0);
  EXPECT_EQ(s.median, 7.0);
  EXPECT_EQ(s.max, 7u);
}

}  // namespace
}  // namespace helm::metrics
