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

// Inter-rater reliability: ICC(2,k) with an F-based 95% interval and
// Fleiss' kappa.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "helm/core/constructs.hpp"
#include "helm/core/types.hpp"

namespace helm::reliability {

// Subjects x raters grid. Missing cells are nullopt; a matrix without missing
// cells is fully crossed.
class RatingMatrix {
 public:
  RatingMatrix(std::size_t subjects, std::size_t raters);

  // Builds a fully crossed matrix from rows (one row per subject). Throws
  // std::invalid_argument on ragged rows.
  static RatingMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t subjects() const noexcept { return subjects_; }
  std::size_t raters() const noexcept { return raters_; }

  void set(std::size_t subject, std::size_t rater, double value);
  std::optional<double> get(std::size_t subject, std::size_t rater) const;
  // Throws std::logic_error on a missing cell.
  double at(std::size_t subject, std::size_t rater) const;

  bool fully_crossed() const;

  std::optional<Dimension> dimension;
  std::vector<std::string> subject_labels;
  std::vector<std::string> rater_labels;

 private:
  std::size_t subjects_;
  std::size_t raters_;
  std::vector<std::optional<double>> cells_;
};

// Two-way ANOVA mean squares for a fully crossed matrix.
struct MeanSquares {
  double rows = 0.0;     // between subjects
  double columns = 0.0;  // between raters
  double error = 0.0;    // residual
  std::size_t n = 0;     // subjects
  std::size_t k = 0;     // raters
};

MeanSquares mean_squares(const RatingMatrix& matrix);

struct IccResult {
  double icc = 0.0;         // ICC(2,k)
  double icc_single = 0.0;  // ICC(2,1), the basis of the interval
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t n_subjects = 0;
  std::size_t n_raters = 0;
};

// Two-way random effects, absolute agreement, average of k raters
// (Shrout & Fleiss ICC(2,k)). The 95% interval is the F-distribution interval
// for ICC(2,1) (McGraw & Wong), stepped up to k raters with Spearman-Brown.
// Throws DegenerateInputError when the matrix is not fully crossed, smaller
// than 2x2, or has zero between-subject variance.
IccResult icc(const RatingMatrix& matrix, double confidence = 0.95);

// Subjects x categories counts; every row must sum to `raters_per_subject`.
// Throws std::invalid_argument on malformed counts and DegenerateInputError
// when all ratings fall in one category.
double fleiss_kappa(const std::vector<std::vector<int>>& counts,
                    int raters_per_subject);

// Counts grid over categories 1..5 from a fully crossed integer matrix.
std::vector<std::vector<int>> likert_counts(const RatingMatrix& matrix);

// 'poor' (< 0.5), 'moderate' (< 0.75), 'good' (< 0.9), 'excellent'.
std::string_view classify_icc(double icc);

// Fully crossed calibration blocks, one per (dimension, domain panel).
struct CalibrationBlock {
  Dimension dimension = Dimension::kIntent;
  std::string domain;
  // Subjects are (scenario, system) pairs; a cell is the rater's mean over
  // the dimension's constructs.
  RatingMatrix continuous{0, 0};
  // Subjects are (scenario, system, construct); cells are raw Likert values.
  RatingMatrix categorical{0, 0};
};

// Collects ratings of calibration scenarios. Raters are the evaluators who
// rated calibration scenarios of that domain. Throws DegenerateInputError
// naming the gaps when a block is not fully crossed or no calibration
// ratings exist.
std::vector<CalibrationBlock> calibration_blocks(
    std::span<const RatingRecord> ratings, std::span<const Scenario> scenarios);

}  // namespace helm::reliability
