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

#include "helm/scoring/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace helm::scoring {

namespace {

// Integer sum and count; exact regardless of insertion order.
struct Tally {
  long long sum = 0;
  std::size_t n = 0;

  void add(int v) {
    sum += v;
    ++n;
  }
  double mean() const { return static_cast<double>(sum) / static_cast<double>(n); }
};

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

// scenario -> tally, for one (system, construct) cell.
using ScenarioTallies = std::map<std::string, Tally>;

double mean_of_scenarios(const ScenarioTallies& tallies) {
  std::vector<double> means;
  means.reserve(tallies.size());
  for (const auto& [_, t] : tallies) means.push_back(t.mean());
  return mean_of(means);
}

}  // namespace

std::optional<double> construct_mean(std::span<const RatingRecord> ratings) {
  if (ratings.empty()) return std::nullopt;
  ScenarioTallies tallies;
  for (const auto& r : ratings) tallies[r.scenario_id].add(r.value);
  return mean_of_scenarios(tallies);
}

std::optional<double> dimension_score(
    std::span<const std::optional<double>> construct_means) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& m : construct_means) {
    if (!m) continue;
    sum += *m;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

double hcs(std::span<const double> dimension_scores) {
  if (dimension_scores.size() != kNumDimensions) {
    throw std::invalid_argument("hcs needs exactly five dimension scores, got " +
                                std::to_string(dimension_scores.size()));
  }
  std::array<double, kNumDimensions> s{};
  std::copy(dimension_scores.begin(), dimension_scores.end(), s.begin());
  for (double x : s) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("hcs: dimension scores must be positive and finite");
    }
  }
  // Sorting makes the result exactly permutation invariant.
  std::sort(s.begin(), s.end());
  if (s.front() == s.back()) return s.front();
  double log_sum = 0.0;
  for (double x : s) log_sum += std::log(x);
  return std::exp(log_sum / static_cast<double>(kNumDimensions));
}

std::vector<SystemScores> score_systems(std::span<const RatingRecord> ratings) {
  // system -> construct -> scenario -> tally
  std::map<std::string, std::array<ScenarioTallies, kNumConstructs>> cells;
  for (const auto& r : ratings) {
    cells[r.system_id][static_cast<std::size_t>(r.construct)][r.scenario_id].add(r.value);
  }

  std::vector<SystemScores> out;
  for (const auto& [system, constructs] : cells) {
    SystemScores s;
    s.system_id = system;
    for (std::size_t c = 0; c < kNumConstructs; ++c) {
      if (!constructs[c].empty()) s.construct_means[c] = mean_of_scenarios(constructs[c]);
    }

    bool complete = true;
    std::array<double, kNumDimensions> dim_values{};
    for (Dimension d : kAllDimensions) {
      const auto members = constructs_of(d);
      std::array<std::optional<double>, 4> means;
      std::size_t n_ratings = 0;
      // scenario -> construct-level scenario means within this dimension
      std::map<std::string, std::vector<double>> per_scenario;
      for (std::size_t i = 0; i < members.size(); ++i) {
        const auto idx = static_cast<std::size_t>(members[i]);
        means[i] = s.construct_means[idx];
        for (const auto& [scenario, tally] : constructs[idx]) {
          per_scenario[scenario].push_back(tally.mean());
          n_ratings += tally.n;
        }
      }
      auto score = dimension_score(means);
      const auto di = static_cast<std::size_t>(d);
      if (!score) {
        complete = false;
        s.diagnostics.push_back("no ratings for dimension '" +
                                std::string(to_string(d)) + "'");
        continue;
      }
      std::vector<double> scenario_means;
      for (const auto& [_, v] : per_scenario) scenario_means.push_back(mean_of(v));
      s.dimensions[di] = DimensionScore{d, *score, sample_std(scenario_means),
                                        n_ratings, per_scenario.size()};
      dim_values[di] = *score;
    }
    if (complete) s.hcs = hcs(dim_values);
    out.push_back(std::move(s));
  }
  return out;
}

std::map<std::pair<std::string, std::string>, double> scenario_hcs(
    std::span<const RatingRecord> ratings) {
  // (scenario, system) -> construct -> tally
  std::map<std::pair<std::string, std::string>, std::array<Tally, kNumConstructs>> cells;
  for (const auto& r : ratings) {
    cells[{r.scenario_id, r.system_id}][static_cast<std::size_t>(r.construct)].add(r.value);
  }
  std::map<std::pair<std::string, std::string>, double> out;
  for (const auto& [key, tallies] : cells) {
    std::array<double, kNumDimensions> dims{};
    bool complete = true;
    for (Dimension d : kAllDimensions) {
      std::array<std::optional<double>, 4> means;
      const auto members = constructs_of(d);
      for (std::size_t i = 0; i < members.size(); ++i) {
        const auto& t = tallies[static_cast<std::size_t>(members[i])];
        if (t.n > 0) means[i] = t.mean();
      }
      auto score = dimension_score(means);
      if (!score) {
        complete = false;
        break;
      }
      dims[static_cast<std::size_t>(d)] = *score;
    }
    if (complete) out.emplace(key, hcs(dims));
  }
  return out;
}

}  // namespace helm::scoring
