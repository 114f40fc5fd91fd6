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

#include "helm/reliability/reliability.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include <boost/math/distributions/fisher_f.hpp>

#include "helm/core/errors.hpp"

namespace helm::reliability {

RatingMatrix::RatingMatrix(std::size_t subjects, std::size_t raters)
    : subjects_(subjects), raters_(raters), cells_(subjects * raters) {}

RatingMatrix RatingMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t k = rows.empty() ? 0 : rows.front().size();
  RatingMatrix m(rows.size(), k);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != k) throw std::invalid_argument("ragged rating matrix");
    for (std::size_t j = 0; j < k; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

void RatingMatrix::set(std::size_t subject, std::size_t rater, double value) {
  if (subject >= subjects_ || rater >= raters_) {
    throw std::out_of_range("rating matrix index out of range");
  }
  cells_[subject * raters_ + rater] = value;
}

std::optional<double> RatingMatrix::get(std::size_t subject, std::size_t rater) const {
  if (subject >= subjects_ || rater >= raters_) {
    throw std::out_of_range("rating matrix index out of range");
  }
  return cells_[subject * raters_ + rater];
}

double RatingMatrix::at(std::size_t subject, std::size_t rater) const {
  auto v = get(subject, rater);
  if (!v) throw std::logic_error("missing rating matrix cell");
  return *v;
}

bool RatingMatrix::fully_crossed() const {
  for (const auto& c : cells_) {
    if (!c) return false;
  }
  return true;
}

MeanSquares mean_squares(const RatingMatrix& m) {
  const std::size_t n = m.subjects();
  const std::size_t k = m.raters();
  if (!m.fully_crossed()) {
    throw DegenerateInputError(
        "rating matrix is not fully crossed; ICC needs the calibration block "
        "rated by every panel member");
  }
  if (n < 2 || k < 2) {
    throw DegenerateInputError("ICC needs at least 2 subjects and 2 raters");
  }
  std::vector<double> row_sum(n, 0.0), col_sum(k, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double x = m.at(i, j);
      row_sum[i] += x;
      col_sum[j] += x;
      total += x;
    }
  }
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  const double nk = dn * dk;

  // Deviations are formed as scaled numerators (n*row_sum - total and so on),
  // which stay exact for integer ratings; a constant row mean then gives an
  // exact zero instead of rounding noise.
  double ssr = 0.0, ssc = 0.0, sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = dn * row_sum[i] - total;
    ssr += d * d;
  }
  ssr /= dn * dn * dk;
  for (std::size_t j = 0; j < k; ++j) {
    const double d = dk * col_sum[j] - total;
    ssc += d * d;
  }
  ssc /= dn * dk * dk;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double r = nk * m.at(i, j) - dn * row_sum[i] - dk * col_sum[j] + total;
      sse += r * r;
    }
  }
  sse /= nk * nk;
  MeanSquares ms;
  ms.n = n;
  ms.k = k;
  ms.rows = ssr / (dn - 1.0);
  ms.columns = ssc / (dk - 1.0);
  ms.error = sse / ((dn - 1.0) * (dk - 1.0));
  return ms;
}

IccResult icc(const RatingMatrix& matrix, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("confidence must lie in (0, 1)");
  }
  const MeanSquares ms = mean_squares(matrix);
  const double n = static_cast<double>(ms.n);
  const double k = static_cast<double>(ms.k);
  const double msr = ms.rows, msc = ms.columns, mse = ms.error;
  constexpr double kRelEps = 1e-12;
  if (msr <= kRelEps * (msr + msc + mse)) {
    throw DegenerateInputError("zero between-subject variance; ICC is undefined");
  }
  const double denom = msr + (msc - mse) / n;
  if (std::abs(denom) <= kRelEps * (msr + (msc + mse) / n)) {
    throw DegenerateInputError("ICC(2,k) denominator is zero; ICC is undefined");
  }

  IccResult out;
  out.n_subjects = ms.n;
  out.n_raters = ms.k;
  out.icc = (msr - mse) / denom;
  out.icc_single = (msr - mse) / (msr + (k - 1.0) * mse + k * (msc - mse) / n);

  const double r = out.icc_single;
  if (r >= 1.0) {
    out.ci_lo = out.ci_hi = out.icc;
    return out;
  }
  // Satterthwaite degrees of freedom for the interval.
  const double a = k * r / (n * (1.0 - r));
  const double b = 1.0 + k * r * (n - 1.0) / (n * (1.0 - r));
  const double v = std::pow(a * msc + b * mse, 2.0) /
                   (std::pow(a * msc, 2.0) / (k - 1.0) +
                    std::pow(b * mse, 2.0) / ((n - 1.0) * (k - 1.0)));
  const double alpha = 1.0 - confidence;
  if (!std::isfinite(v) || v <= 0.0) {
    out.ci_lo = out.ci_hi = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  using boost::math::fisher_f_distribution;
  const double f_lower = boost::math::quantile(fisher_f_distribution<double>(n - 1.0, v),
                                               1.0 - alpha / 2.0);
  const double f_upper = boost::math::quantile(fisher_f_distribution<double>(v, n - 1.0),
                                               1.0 - alpha / 2.0);
  const double lo1 = n * (msr - f_lower * mse) /
                     (f_lower * (k * msc + (k * n - k - n) * mse) + n * msr);
  const double hi1 = n * (f_upper * msr - mse) /
                     (k * msc + (k * n - k - n) * mse + n * f_upper * msr);
  out.ci_lo = lo1 * k / (1.0 + lo1 * (k - 1.0));
  out.ci_hi = hi1 * k / (1.0 + hi1 * (k - 1.0));
  return out;
}

double fleiss_kappa(const std::vector<std::vector<int>>& counts,
                    int raters_per_subject) {
  if (raters_per_subject < 2) {
    throw std::invalid_argument("fleiss_kappa needs at least 2 raters per subject");
  }
  if (counts.empty()) throw std::invalid_argument("fleiss_kappa: no subjects");
  const std::size_t categories = counts.front().size();
  const long long n = raters_per_subject;
  const long long subjects = static_cast<long long>(counts.size());

  // Integer arithmetic up to the final division keeps rational inputs exact.
  long long agree = 0;  // sum_i sum_j n_ij (n_ij - 1)
  std::vector<long long> col(categories, 0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i].size() != categories) {
      throw std::invalid_argument("fleiss_kappa: ragged count grid");
    }
    long long row = 0;
    for (std::size_t j = 0; j < categories; ++j) {
      const long long c = counts[i][j];
      if (c < 0) throw std::invalid_argument("fleiss_kappa: negative count");
      agree += c * (c - 1);
      col[j] += c;
      row += c;
    }
    if (row != n) {
      throw std::invalid_argument("fleiss_kappa: subject " + std::to_string(i) +
                                  " has " + std::to_string(row) +
                                  " ratings, expected " + std::to_string(n));
    }
  }
  const long long total = subjects * n;
  long long marg = 0;  // sum_j (column total)^2
  for (long long c : col) marg += c * c;
  if (marg == total * total) {
    throw DegenerateInputError(
        "fleiss_kappa: every rating falls in one category (chance agreement is 1)");
  }
  // kappa = (P - Pe) / (1 - Pe) with P = agree / (N n (n-1)), Pe = marg / (N n)^2,
  // multiplied through by (N n)^2 (n - 1).
  const double num = static_cast<double>(agree * total - marg * (n - 1));
  const double den = static_cast<double>(total * total * (n - 1) - marg * (n - 1));
  return num / den;
}

std::vector<std::vector<int>> likert_counts(const RatingMatrix& matrix) {
  std::vector<std::vector<int>> out(matrix.subjects(), std::vector<int>(kLikertMax, 0));
  for (std::size_t i = 0; i < matrix.subjects(); ++i) {
    for (std::size_t j = 0; j < matrix.raters(); ++j) {
      const double v = matrix.at(i, j);
      const int c = static_cast<int>(std::lround(v));
      if (c < kLikertMin || c > kLikertMax || static_cast<double>(c) != v) {
        throw std::invalid_argument("likert_counts: cell is not a Likert value");
      }
      ++out[i][static_cast<std::size_t>(c - 1)];
    }
  }
  return out;
}

std::string_view classify_icc(double icc) {
  if (icc < 0.5) return "poor";
  if (icc < 0.75) return "moderate";
  if (icc < 0.9) return "good";
  return "excellent";
}

std::vector<CalibrationBlock> calibration_blocks(
    std::span<const RatingRecord> ratings, std::span<const Scenario> scenarios) {
  std::map<std::string, const Scenario*> calib;
  for (const auto& s : scenarios) {
    if (s.calibration) calib.emplace(s.scenario_id, &s);
  }

  using Pair = std::pair<std::string, std::string>;                    // scenario, system
  using Triple = std::tuple<std::string, std::string, ConstructId>;     // + construct
  struct DomainData {
    std::set<std::string> raters;
    std::map<Triple, std::map<std::string, int>> values;  // -> rater -> value
  };
  std::map<std::string, DomainData> domains;
  for (const auto& r : ratings) {
    auto it = calib.find(r.scenario_id);
    if (it == calib.end()) continue;
    auto& d = domains[it->second->domain.to_string()];
    d.raters.insert(r.evaluator_id);
    d.values[{r.scenario_id, r.system_id, r.construct}][r.evaluator_id] = r.value;
  }
  if (domains.empty()) {
    throw DegenerateInputError(
        "no ratings on calibration scenarios; reliability needs a fully crossed "
        "calibration block (scenarios with calibration_flag rated by every panel "
        "member)");
  }

  std::vector<CalibrationBlock> out;
  std::vector<std::string> gaps;
  for (Dimension dim : kAllDimensions) {
    for (const auto& [domain, data] : domains) {
      const std::vector<std::string> raters(data.raters.begin(), data.raters.end());
      std::map<std::string, std::size_t> rater_index;
      for (std::size_t j = 0; j < raters.size(); ++j) rater_index[raters[j]] = j;

      std::vector<Triple> items;
      std::set<Pair> pairs;
      for (const auto& [key, _] : data.values) {
        if (dimension_of(std::get<2>(key)) != dim) continue;
        items.push_back(key);
        pairs.emplace(std::get<0>(key), std::get<1>(key));
      }
      if (items.empty()) continue;

      CalibrationBlock block;
      block.dimension = dim;
      block.domain = domain;
      block.categorical = RatingMatrix(items.size(), raters.size());
      block.categorical.dimension = dim;
      block.categorical.rater_labels = raters;
      for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& [sc, sys, con] = items[i];
        block.categorical.subject_labels.push_back(sc + "/" + sys + "/" +
                                                   std::string(to_string(con)));
        for (const auto& [rater, value] : data.values.at(items[i])) {
          block.categorical.set(i, rater_index.at(rater), value);
        }
      }

      block.continuous = RatingMatrix(pairs.size(), raters.size());
      block.continuous.dimension = dim;
      block.continuous.rater_labels = raters;
      std::size_t row = 0;
      for (const auto& [sc, sys] : pairs) {
        block.continuous.subject_labels.push_back(sc + "/" + sys);
        std::vector<int> sum(raters.size(), 0), cnt(raters.size(), 0);
        for (ConstructId c : constructs_of(dim)) {
          auto it = data.values.find({sc, sys, c});
          if (it == data.values.end()) continue;
          for (const auto& [rater, value] : it->second) {
            sum[rater_index.at(rater)] += value;
            ++cnt[rater_index.at(rater)];
          }
        }
        for (std::size_t j = 0; j < raters.size(); ++j) {
          if (cnt[j] > 0) {
            block.continuous.set(row, j, static_cast<double>(sum[j]) / cnt[j]);
          }
        }
        ++row;
      }

      for (std::size_t i = 0; i < block.categorical.subjects(); ++i) {
        for (std::size_t j = 0; j < raters.size(); ++j) {
          if (!block.categorical.get(i, j)) {
            gaps.push_back(domain + ": " + raters[j] + " has no rating for " +
                           block.categorical.subject_labels[i]);
          }
        }
      }
      out.push_back(std::move(block));
    }
  }
  if (!gaps.empty()) {
    std::string msg = "calibration block is not fully crossed (" +
                      std::to_string(gaps.size()) + " missing cells):";
    for (std::size_t i = 0; i < gaps.size() && i < 10; ++i) msg += "\n  " + gaps[i];
    if (gaps.size() > 10) msg += "\n  ...";
    throw DegenerateInputError(msg);
  }
  return out;
}

}  // namespace helm::reliability
