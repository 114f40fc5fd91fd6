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

#include "helm/session/assignment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "helm/core/errors.hpp"
#include "helm/core/random.hpp"

namespace helm::session {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += "\n  " + p;
  return out;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  seeded_shuffle(std::span<std::size_t>(idx), rng);
  return idx;
}

}  // namespace

InfeasibleAssignmentError::InfeasibleAssignmentError(std::vector<std::string> shortfalls)
    : std::runtime_error("assignment quota cannot be met:" + join(shortfalls)),
      shortfalls_(std::move(shortfalls)) {}

std::set<std::string> Assignment::scenario_ids() const {
  std::set<std::string> out;
  for (const auto& t : tasks) out.insert(t.scenario_id);
  return out;
}

bool Assignment::contains(const std::string& scenario_id,
                          const std::string& system_id) const {
  return std::any_of(tasks.begin(), tasks.end(), [&](const Task& t) {
    return t.scenario_id == scenario_id && t.system_id == system_id;
  });
}

std::vector<int> apportion(int total, std::span<const int> weights,
                           std::span<const std::size_t> tie_order) {
  const long long wsum = std::accumulate(weights.begin(), weights.end(), 0LL);
  std::vector<int> out(weights.size(), 0);
  if (wsum <= 0 || total <= 0) return out;
  // Exact integer quotas: floor(total * w / wsum) with remainder (total * w) % wsum.
  std::vector<long long> rem(weights.size());
  int assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const long long prod = static_cast<long long>(total) * weights[i];
    out[i] = static_cast<int>(prod / wsum);
    rem[i] = prod % wsum;
    assigned += out[i];
  }
  std::vector<std::size_t> rank(weights.size());
  for (std::size_t pos = 0; pos < tie_order.size(); ++pos) rank[tie_order[pos]] = pos;
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rem[a] != rem[b]) return rem[a] > rem[b];
    return rank[a] < rank[b];
  });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++out[order[i]];
  return out;
}

AssignmentPlan build_assignments(std::span<const Scenario> scenarios,
                                 std::span<const std::string> systems,
                                 std::span<const Evaluator> evaluators,
                                 const AssignmentConfig& config,
                                 std::uint64_t seed) {
  if (config.quota < config.quota_min || config.quota > config.quota_max) {
    throw std::invalid_argument("quota " + std::to_string(config.quota) +
                                " outside [" + std::to_string(config.quota_min) +
                                ", " + std::to_string(config.quota_max) + "]");
  }
  if (systems.empty()) throw std::invalid_argument("no systems to assign");
  if (!(config.calibration_fraction >= 0.0 && config.calibration_fraction < 1.0)) {
    throw std::invalid_argument("calibration_fraction must lie in [0, 1)");
  }
  {
    std::set<std::string> ids;
    for (const auto& e : evaluators) {
      if (!ids.insert(e.id).second) {
        throw std::invalid_argument("duplicate evaluator id '" + e.id + "'");
      }
    }
  }

  std::vector<std::string> system_list(systems.begin(), systems.end());
  std::sort(system_list.begin(), system_list.end());
  system_list.erase(std::unique(system_list.begin(), system_list.end()),
                    system_list.end());

  // Panels in first-seen order of evaluators; scenarios sorted by id.
  std::map<std::string, std::vector<const Scenario*>> by_panel;
  std::vector<std::string> panels;
  for (const auto& e : evaluators) {
    if (by_panel.contains(e.panel)) continue;
    panels.push_back(e.panel);
    auto& list = by_panel[e.panel];
    for (const auto& s : scenarios) {
      if (e.panel.empty() || s.domain.to_string() == e.panel) list.push_back(&s);
    }
    std::sort(list.begin(), list.end(), [](const Scenario* a, const Scenario* b) {
      return a->scenario_id < b->scenario_id;
    });
  }

  AssignmentPlan plan;
  plan.assignments.resize(evaluators.size());
  std::vector<std::string> shortfalls;

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const std::string& panel = panels[p];
    const std::string panel_name = panel.empty() ? "*" : panel;
    std::mt19937_64 rng(splitmix64(seed ^ hash_id(panel)));

    // Category buckets.
    std::array<std::vector<const Scenario*>, kNumCategories> bucket;
    for (const Scenario* s : by_panel[panel]) {
      bucket[static_cast<std::size_t>(s->category)].push_back(s);
    }
    std::array<int, kNumCategories> size{};
    for (int c = 0; c < kNumCategories; ++c) size[c] = static_cast<int>(bucket[c].size());
    const int panel_total = std::accumulate(size.begin(), size.end(), 0);

    // Calibration subset: flagged scenarios, or a stratified sample.
    std::array<std::vector<const Scenario*>, kNumCategories> calib, pool;
    bool any_flagged = false;
    for (const Scenario* s : by_panel[panel]) any_flagged = any_flagged || s->calibration;
    if (any_flagged) {
      for (int c = 0; c < kNumCategories; ++c) {
        for (const Scenario* s : bucket[c]) (s->calibration ? calib[c] : pool[c]).push_back(s);
      }
    } else {
      const int n_calib = static_cast<int>(
          std::lround(config.calibration_fraction * static_cast<double>(panel_total)));
      const auto ties = shuffled_indices(kNumCategories, rng);
      const auto per_cat = apportion(n_calib, size, ties);
      for (int c = 0; c < kNumCategories; ++c) {
        auto order = shuffled_indices(bucket[c].size(), rng);
        for (std::size_t i = 0; i < order.size(); ++i) {
          const Scenario* s = bucket[c][order[i]];
          (static_cast<int>(i) < per_cat[c] ? calib[c] : pool[c]).push_back(s);
        }
      }
    }
    for (auto& list : calib) {
      std::sort(list.begin(), list.end(), [](const Scenario* a, const Scenario* b) {
        return a->scenario_id < b->scenario_id;
      });
    }
    for (const auto& list : calib) {
      for (const Scenario* s : list) plan.calibration_ids.insert(s->scenario_id);
    }

    // Round-robin cursor over a seeded permutation of each category pool.
    std::array<std::vector<const Scenario*>, kNumCategories> cycle;
    std::array<std::size_t, kNumCategories> cursor{};
    for (int c = 0; c < kNumCategories; ++c) {
      auto order = shuffled_indices(pool[c].size(), rng);
      for (auto i : order) cycle[c].push_back(pool[c][i]);
    }

    // Panel members in a seeded order so no evaluator systematically gets the
    // first pick.
    std::vector<std::size_t> members;
    for (std::size_t e = 0; e < evaluators.size(); ++e) {
      if (evaluators[e].panel == panel) members.push_back(e);
    }
    seeded_shuffle(std::span<std::size_t>(members), rng);

    for (std::size_t e : members) {
      const Evaluator& ev = evaluators[e];
      Assignment& a = plan.assignments[e];
      a.evaluator_id = ev.id;
      a.panel = ev.panel;
      a.quota = config.quota;
      a.rng_seed = splitmix64(seed ^ hash_id(ev.id));
      std::mt19937_64 erng(a.rng_seed);

      const auto ties = shuffled_indices(kNumCategories, erng);
      const auto target = apportion(config.quota, size, ties);

      std::vector<const Scenario*> picked_calib, picked;
      for (int c = 0; c < kNumCategories; ++c) {
        const auto cat = std::string(to_string(static_cast<ScenarioCategory>(c)));
        const int n_cal = static_cast<int>(calib[c].size());
        const int demand = target[c] - n_cal;
        if (demand < 0) {
          shortfalls.push_back(panel_name + "/" + cat + ": calibration subset has " +
                               std::to_string(n_cal) + " scenarios but " + ev.id +
                               "'s share is " + std::to_string(target[c]));
          continue;
        }
        if (demand > static_cast<int>(cycle[c].size())) {
          shortfalls.push_back(panel_name + "/" + cat + ": " + ev.id + " needs " +
                               std::to_string(demand) + " scenarios, only " +
                               std::to_string(cycle[c].size()) + " available (short " +
                               std::to_string(demand - static_cast<int>(cycle[c].size())) +
                               ")");
          continue;
        }
        picked_calib.insert(picked_calib.end(), calib[c].begin(), calib[c].end());
        for (int i = 0; i < demand; ++i) {
          picked.push_back(cycle[c][cursor[c]]);
          cursor[c] = (cursor[c] + 1) % cycle[c].size();
        }
      }

      std::sort(picked_calib.begin(), picked_calib.end(),
                [](const Scenario* x, const Scenario* y) { return x->scenario_id < y->scenario_id; });
      seeded_shuffle(std::span<const Scenario*>(picked), erng);
      auto expand = [&](const Scenario* s) {
        std::vector<std::string> order = system_list;
        seeded_shuffle(std::span<std::string>(order), erng);
        for (auto& sys : order) a.tasks.push_back({s->scenario_id, sys});
      };
      for (const Scenario* s : picked_calib) expand(s);
      for (const Scenario* s : picked) expand(s);
    }
  }
  if (!shortfalls.empty()) throw InfeasibleAssignmentError(std::move(shortfalls));
  return plan;
}

void write_plan(std::ostream& out, const AssignmentPlan& plan) {
  nlohmann::ordered_json j;
  j["calibration"] = std::vector<std::string>(plan.calibration_ids.begin(),
                                              plan.calibration_ids.end());
  auto arr = nlohmann::ordered_json::array();
  for (const auto& a : plan.assignments) {
    nlohmann::ordered_json aj;
    aj["evaluator_id"] = a.evaluator_id;
    aj["panel"] = a.panel;
    aj["quota"] = a.quota;
    aj["rng_seed"] = a.rng_seed;
    auto tasks = nlohmann::ordered_json::array();
    for (const auto& t : a.tasks) {
      tasks.push_back({{"scenario_id", t.scenario_id}, {"system_id", t.system_id}});
    }
    aj["tasks"] = std::move(tasks);
    arr.push_back(std::move(aj));
  }
  j["assignments"] = std::move(arr);
  out << j.dump(2) << '\n';
}

AssignmentPlan read_plan(std::istream& in) {
  AssignmentPlan plan;
  try {
    const auto j = nlohmann::json::parse(in);
    for (const auto& id : j.at("calibration")) plan.calibration_ids.insert(id.get<std::string>());
    for (const auto& aj : j.at("assignments")) {
      Assignment a;
      a.evaluator_id = aj.at("evaluator_id").get<std::string>();
      a.panel = aj.value("panel", std::string{});
      a.quota = aj.value("quota", 0);
      a.rng_seed = aj.value("rng_seed", std::uint64_t{0});
      for (const auto& t : aj.at("tasks")) {
        a.tasks.push_back({t.at("scenario_id").get<std::string>(),
                           t.at("system_id").get<std::string>()});
      }
      plan.assignments.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError({{"assignments", std::nullopt, e.what()}});
  }
  return plan;
}

AssignmentPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open assignments file " + path.string());
  return read_plan(in);
}

std::vector<Evaluator> load_evaluators(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open evaluators file " + path.string());
  std::vector<Evaluator> out;
  try {
    const auto j = nlohmann::json::parse(in);
    for (const auto& ej : j) {
      Evaluator e;
      e.id = ej.at("id").get<std::string>();
      e.panel = ej.value("panel", std::string{});
      if (ej.contains("token")) e.token = ej["token"].get<std::string>();
      out.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError({{path.string(), std::nullopt, e.what()}});
  }
  return out;
}

}  // namespace helm::session
