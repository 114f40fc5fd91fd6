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

// Balanced, seeded assignment of scenarios to expert evaluators.
//
// The unit of assignment is a scenario; an assigned scenario expands to one
// task per system. Each evaluator belongs to a domain panel and draws from
// that domain's scenarios. A calibration subset per domain goes to every
// panel member. The remaining quota is filled category by category so that
// each evaluator's category counts stay within 1 of their proportional share,
// and scenarios are handed out round-robin over a seeded shuffle so that
// coverage within a category is as even as the quota allows.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "helm/core/types.hpp"

namespace helm::session {

struct Evaluator {
  std::string id;
  std::string panel;  // domain label; empty means every domain
  std::optional<std::string> token;
};

struct AssignmentConfig {
  int quota = 75;  // scenarios per evaluator, calibration included
  int quota_min = 70;
  int quota_max = 80;
  // Used only for domains that have no scenario with calibration_flag set.
  double calibration_fraction = 0.10;
};

struct Task {
  std::string scenario_id;
  std::string system_id;

  friend bool operator==(const Task&, const Task&) = default;
  friend auto operator<=>(const Task&, const Task&) = default;
};

struct Assignment {
  std::string evaluator_id;
  std::string panel;
  int quota = 0;
  std::uint64_t rng_seed = 0;
  std::vector<Task> tasks;  // calibration scenarios first

  std::set<std::string> scenario_ids() const;
  bool contains(const std::string& scenario_id,
                const std::string& system_id) const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct AssignmentPlan {
  std::vector<Assignment> assignments;    // evaluator order as given
  std::set<std::string> calibration_ids;  // across all panels

  friend bool operator==(const AssignmentPlan&, const AssignmentPlan&) = default;
};

// Quota cannot be met; `shortfalls` names each (panel, category) cell.
class InfeasibleAssignmentError : public std::runtime_error {
 public:
  explicit InfeasibleAssignmentError(std::vector<std::string> shortfalls);
  const std::vector<std::string>& shortfalls() const noexcept { return shortfalls_; }

 private:
  std::vector<std::string> shortfalls_;
};

// Deterministic given `seed`. Throws std::invalid_argument for a quota outside
// [quota_min, quota_max], duplicate evaluator ids, or no systems.
AssignmentPlan build_assignments(std::span<const Scenario> scenarios,
                                 std::span<const std::string> systems,
                                 std::span<const Evaluator> evaluators,
                                 const AssignmentConfig& config,
                                 std::uint64_t seed);

// Largest-remainder apportionment of `total` over `weights`; ties broken by
// `tie_order` (indices, earlier wins). Every share lies within 1 of
// total * w / sum(w).
std::vector<int> apportion(int total, std::span<const int> weights,
                           std::span<const std::size_t> tie_order);

// JSON: {"calibration": [...], "assignments": [{evaluator_id, panel, quota,
// rng_seed, tasks: [{scenario_id, system_id}]}]}
void write_plan(std::ostream& out, const AssignmentPlan& plan);
AssignmentPlan read_plan(std::istream& in);
AssignmentPlan load_plan(const std::filesystem::path& path);

// JSON array of {"id", "panel"?, "token"?}.
std::vector<Evaluator> load_evaluators(const std::filesystem::path& path);

}  // namespace helm::session
