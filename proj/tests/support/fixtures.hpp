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

#include <array>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

#include "helm/core/io.hpp"
#include "helm/core/types.hpp"
#include "helm/session/assignment.hpp"

namespace helm::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("helm-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Scenario make_scenario(const std::string& id, ScenarioCategory category,
                              const std::string& domain = "movies",
                              bool calibration = false) {
  Scenario s;
  s.scenario_id = id;
  s.domain = Domain::parse(domain);
  s.category = category;
  s.calibration = calibration;
  return s;
}

// Scenarios with the given per-category counts, ids "<prefix>-<n>".
inline std::vector<Scenario> scenarios_with_counts(const std::array<int, kNumCategories>& counts,
                                                   const std::string& domain = "movies",
                                                   const std::string& prefix = "sc") {
  std::vector<Scenario> out;
  int n = 0;
  for (int c = 0; c < kNumCategories; ++c) {
    for (int i = 0; i < counts[static_cast<std::size_t>(c)]; ++i) {
      out.push_back(make_scenario(prefix + "-" + std::to_string(n++),
                                  static_cast<ScenarioCategory>(c), domain));
    }
  }
  return out;
}

// A small bundle for session tests: every system turn asks a question, so
// every construct applies to every task.
inline std::shared_ptr<const Bundle> session_bundle(int n_scenarios = 6,
                                                    std::vector<std::string> systems = {"A", "B"}) {
  auto b = std::make_shared<Bundle>();
  for (int i = 0; i < n_scenarios; ++i) {
    auto s = make_scenario("q" + std::to_string(i),
                           static_cast<ScenarioCategory>(i % kNumCategories), "movies",
                           i == 0);
    b->scenarios.push_back(s);
    for (const auto& sys : systems) {
      Transcript t;
      t.scenario_id = s.scenario_id;
      t.system_id = sys;
      t.turns = {{Role::kUser, "something to watch", std::nullopt},
                 {Role::kSystem, "what mood are you in?", std::nullopt}};
      b->transcripts.push_back(t);
    }
  }
  return b;
}

inline std::vector<session::Evaluator> panel(int n, const std::string& domain = "movies") {
  std::vector<session::Evaluator> out;
  for (int i = 0; i < n; ++i) out.push_back({"e" + std::to_string(i + 1), domain, std::nullopt});
  return out;
}

inline session::AssignmentConfig small_quota(int quota) {
  session::AssignmentConfig c;
  c.quota = quota;
  c.quota_min = 1;
  c.quota_max = quota;
  return c;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace helm::testing
