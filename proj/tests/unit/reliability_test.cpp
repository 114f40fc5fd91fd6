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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "helm/core/errors.hpp"
#include "helm/core/io.hpp"
#include "helm/core/random.hpp"
#include "helm/reliability/reliability.hpp"
#include "support/oracles.hpp"

namespace helm::reliability {
namespace {

const std::string kData = HELM_TEST_DATA;

// Six targets rated by four judges; the classic two-way random effects table.
const std::vector<std::vector<double>> kShroutFleiss = {
    {9, 2, 5, 8}, {6, 1, 3, 2}, {8, 4, 6, 8}, {7, 1, 2, 6}, {10, 5, 6, 9}, {6, 2, 4, 7}};

TEST(Kappa, WorkedExample) {
  EXPECT_EQ(fleiss_kappa({{3, 0}, {0, 3}, {1, 2}}, 3), 22.0 / 40.0);
  EXPECT_EQ(fleiss_kappa({{4, 0, 0}, {0, 4, 0}, {0, 0, 4}}, 4), 1.0);
}

TEST(Kappa, NearZeroForRandomRatings) {
  std::mt19937_64 rng(500);
  std::vector<std::vector<int>> counts(500, std::vector<int>(5, 0));
  for (auto& row : counts) {
    for (int r = 0; r < 5; ++r) ++row[uniform_index(rng, 5)];
  }
  EXPECT_LT(std::abs(fleiss_kappa(counts, 5)), 0.05);
}

TEST(Kappa, InvariantUnderCategoryRelabel) {
  std::mt19937_64 rng(12);
  for (int c = 0; c < 200; ++c) {
    const int raters = static_cast<int>(uniform_index(rng, 4)) + 2;
    std::vector<std::vector<int>> counts(uniform_index(rng, 10) + 2, std::vector<int>(5, 0));
    for (auto& row : counts) {
      for (int r = 0; r < raters; ++r) ++row[uniform_index(rng, 5)];
    }
    std::vector<std::size_t> perm(5);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto relabeled = counts;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      for (std::size_t j = 0; j < 5; ++j) relabeled[i][perm[j]] = counts[i][j];
    }
    try {
      const double k = fleiss_kappa(counts, raters);
      EXPECT_EQ(fleiss_kappa(relabeled, raters), k);
      EXPECT_NEAR(k, oracle::fleiss_kappa(counts, raters), 1e-12);
    } catch (const DegenerateInputError&) {
      EXPECT_THROW(fleiss_kappa(relabeled, raters), DegenerateInputError);
    }
  }
}

TEST(Kappa, RejectsBadGrids) {
  EXPECT_THROW(fleiss_kappa({{2, 1}}, 1), std::invalid_argument);
  EXPECT_THROW(fleiss_kappa({}, 3), std::invalid_argument);
  EXPECT_THROW(fleiss_kappa({{2, 0}, {1, 1, 0}}, 2), std::invalid_argument);
  EXPECT_THROW(fleiss_kappa({{3, 0}, {1, 1}}, 3), std::invalid_argument);
  EXPECT_THROW(fleiss_kappa({{3, 0}, {3, 0}}, 3), DegenerateInputError);
}

TEST(Icc, ShroutFleissTable) {
  const auto r = icc(RatingMatrix::from_rows(kShroutFleiss));
  EXPECT_NEAR(r.icc_single, 0.29, 0.005);
  EXPECT_NEAR(r.icc, 0.62, 0.005);
  EXPECT_NEAR(r.icc, oracle::icc2k(kShroutFleiss), 1e-12);
  EXPECT_LE(r.ci_lo, r.icc_single);
  EXPECT_GE(r.ci_hi, r.icc_single);
  EXPECT_EQ(r.n_subjects, 6u);
  EXPECT_EQ(r.n_raters, 4u);
  const auto ms = mean_squares(RatingMatrix::from_rows(kShroutFleiss));
  const auto a = oracle::two_way_anova(kShroutFleiss);
  EXPECT_NEAR(ms.rows, a.msr, 1e-12);
  EXPECT_NEAR(ms.columns, a.msc, 1e-12);
  EXPECT_NEAR(ms.error, a.mse, 1e-12);
}

TEST(Icc, ClassificationSurvivesShiftAndScale) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> shift(-10.0, 10.0), scale(0.1, 10.0);
  for (int c = 0; c < 200; ++c) {
    std::vector<std::vector<double>> rows(uniform_index(rng, 6) + 3);
    const std::size_t k = uniform_index(rng, 4) + 2;
    for (auto& row : rows) {
      const double base = static_cast<double>(uniform_index(rng, 5)) + 1.0;
      for (std::size_t j = 0; j < k; ++j) {
        row.push_back(std::clamp(base + static_cast<double>(uniform_index(rng, 3)) - 1.0,
                                 1.0, 5.0));
      }
    }
    IccResult base;
    try {
      base = icc(RatingMatrix::from_rows(rows));
    } catch (const DegenerateInputError&) {
      continue;
    }
    const double a = shift(rng), b = scale(rng);
    auto moved = rows;
    for (auto& row : moved) {
      for (auto& v : row) v = a + b * v;
    }
    const auto after = icc(RatingMatrix::from_rows(moved));
    EXPECT_NEAR(after.icc, base.icc, 1e-9);
    // Skip values sitting on a band edge, where rounding may flip the label.
    const bool near_edge = std::abs(base.icc - 0.5) < 1e-9 ||
                           std::abs(base.icc - 0.75) < 1e-9 || std::abs(base.icc - 0.9) < 1e-9;
    if (!near_edge) {
      EXPECT_EQ(classify_icc(after.icc), classify_icc(base.icc));
    }
  }
}

TEST(Icc, Bands) {
  EXPECT_EQ(classify_icc(0.49), "poor");
  EXPECT_EQ(classify_icc(0.5), "moderate");
  EXPECT_EQ(classify_icc(0.75), "good");
  EXPECT_EQ(classify_icc(0.9), "excellent");
}

TEST(Icc, DegenerateInputs) {
  EXPECT_THROW(icc(RatingMatrix::from_rows({{3, 3}, {3, 3}})), DegenerateInputError);
  EXPECT_THROW(icc(RatingMatrix::from_rows({{1, 2, 3}})), DegenerateInputError);
  RatingMatrix gap(3, 2);
  gap.set(0, 0, 1);
  gap.set(0, 1, 2);
  gap.set(1, 0, 3);
  EXPECT_THROW(icc(gap), DegenerateInputError);
  EXPECT_THROW(RatingMatrix::from_rows({{1, 2}, {3}}), std::invalid_argument);
  EXPECT_THROW(icc(RatingMatrix::from_rows(kShroutFleiss), 1.0), std::invalid_argument);
}

TEST(Blocks, MiniBundle) {
  BundlePaths paths;
  paths.catalog = kData + "/mini/catalog.jsonl";
  paths.scenarios = kData + "/mini/scenarios.json";
  paths.transcripts = kData + "/mini/transcripts.json";
  paths.ratings = kData + "/mini/ratings.jsonl";
  const auto loaded = load_bundle(paths);
  ASSERT_TRUE(loaded.violations.empty()) << loaded.violations.front().to_string();
  const auto& b = loaded.value;
  const auto blocks = calibration_blocks(b.ratings, b.scenarios);
  ASSERT_EQ(blocks.size(), kNumDimensions);
  for (const auto& block : blocks) {
    EXPECT_EQ(block.domain, "movies");
    EXPECT_EQ(block.continuous.raters(), 3u);
    EXPECT_EQ(block.continuous.subjects(), 4u);  // 2 calibration scenarios x 2 systems
    EXPECT_EQ(block.categorical.subjects(), 16u);
    EXPECT_TRUE(block.continuous.fully_crossed());
    EXPECT_TRUE(block.categorical.fully_crossed());
  }
  const std::vector<RatingRecord> none;
  EXPECT_THROW(calibration_blocks(none, b.scenarios), DegenerateInputError);
}

}  // namespace
}  // namespace helm::reliability
