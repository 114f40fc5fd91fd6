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

// The subcommands behind the `helm` tool. Each cmd_* prints its report to
// `out`, writes it to the output directory and returns the process exit code.

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "helm/core/io.hpp"
#include "helm/faithfulness/faithfulness.hpp"
#include "helm/report/config.hpp"
#include "helm/report/table.hpp"
#include "helm/session/assignment.hpp"

namespace helm::session {
class ApiServer;
}

namespace helm::report {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// Every problem with the config, the bundle, the rules file and the
// evaluator/assignment files. Never throws.
std::vector<Violation> validate_all(const RunConfig& config);

// ---- report builders (pure; bundle must be valid) ----

// `verdicts`, when given, receives every claim verdict in transcript order.
Report metrics_report(const Bundle& bundle, const RunConfig& config,
                      std::vector<faithfulness::ClaimVerdict>* verdicts = nullptr);
// Throws std::invalid_argument if the bundle has no ratings.
Report score_report(const Bundle& bundle, const RunConfig& config);
// Scenarios in `plan.calibration_ids` count as calibration scenarios too.
// Throws DegenerateInputError when no fully crossed calibration block exists.
Report reliability_report(const Bundle& bundle, const RunConfig& config,
                          const session::AssignmentPlan* plan = nullptr);
session::AssignmentPlan make_plan(const Bundle& bundle, const RunConfig& config);
Report assignment_report(const Bundle& bundle, const session::AssignmentPlan& plan);

// ---- subcommands ----

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_metrics(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_score(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_reliability(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_assign(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_report(const RunConfig& config, std::ostream& out, std::ostream& err);

// Serves the rating API until `wait_for_shutdown` returns, then stops the
// server and flushes the event log. `on_ready` receives the bound port.
int cmd_serve(const RunConfig& config, std::ostream& out, std::ostream& err,
              const std::function<void()>& wait_for_shutdown,
              const std::function<void(int port)>& on_ready = {});

}  // namespace helm::report
