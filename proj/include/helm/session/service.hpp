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

// Timed rating sessions over an event-sourced state.
//
// Every mutation is expressed as an Event, appended to the log and then
// applied through the same `apply` used during replay, so state rebuilt from
// the log is the live state by construction. Time is always passed in by the
// caller.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "helm/core/applicability.hpp"
#include "helm/core/io.hpp"
#include "helm/core/types.hpp"
#include "helm/session/assignment.hpp"
#include "helm/session/event_log.hpp"

namespace helm::session {

inline constexpr std::int64_t kDefaultSessionLimitMs = 90LL * 60 * 1000;

// Milliseconds since the epoch, UTC, as "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string format_iso8601(std::int64_t ms);

enum class SessionState { kActive, kExpired, kClosed };
std::string_view to_string(SessionState s);

struct SessionInfo {
  std::string session_id;
  std::string evaluator_id;
  std::int64_t started_ms = 0;
  std::int64_t deadline_ms = 0;
  SessionState state = SessionState::kActive;

  friend bool operator==(const SessionInfo&, const SessionInfo&) = default;
};

// Everything replay has to reproduce.
struct ServiceState {
  std::uint64_t last_seq = 0;
  std::map<std::string, SessionInfo> sessions;
  std::map<std::string, std::string> active;      // evaluator -> session
  std::map<std::string, int> sessions_opened;     // evaluator -> count
  std::map<RatingKey, RatingRecord> latest;       // latest-wins view
  std::uint64_t accepted_ratings = 0;

  friend bool operator==(const ServiceState&, const ServiceState&) = default;
};

nlohmann::ordered_json to_json(const ServiceState& state);
ServiceState state_from_json(const nlohmann::json& j);

enum class ErrorCode {
  kConflict,  // an active session already exists, or the session is closed
  kExpired,   // past the deadline
  kInvalid,   // malformed or out-of-assignment rating
  kNotFound,  // unknown evaluator
  kForbidden,
};

class ServiceError : public std::runtime_error {
 public:
  ServiceError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ServiceConfig {
  std::int64_t session_limit_ms = kDefaultSessionLimitMs;
  std::optional<std::filesystem::path> log_path;
  std::optional<std::filesystem::path> snapshot_path;
  std::uint64_t snapshot_every = 0;  // events between snapshots; 0 disables
};

struct RatingSubmission {
  std::string session_id;
  std::string evaluator_id;
  std::string scenario_id;
  std::string system_id;
  std::string construct_id;
  int value = 0;
};

struct Acknowledgement {
  std::uint64_t seq = 0;
  bool overwrote = false;
};

struct Progress {
  int completed_tasks = 0;  // every applicable construct rated
  int total_tasks = 0;
  int quota = 0;  // scenarios
  // Most recent session; an overdue active session reads as expired.
  std::optional<SessionInfo> session;
};

struct TaskView {
  const Scenario* scenario = nullptr;
  const Transcript* transcript = nullptr;
  std::vector<ConstructId> pending;     // applicable and not yet rated
  std::vector<ConstructId> applicable;
  int index = 0;                        // position in the assignment
};

class SessionService {
 public:
  // Replays `config.log_path` (and a snapshot, when present) if it exists.
  SessionService(std::shared_ptr<const Bundle> bundle, AssignmentPlan plan,
                 std::vector<Evaluator> evaluators, ServiceConfig config);

  SessionInfo open_session(const std::string& evaluator_id, std::int64_t now_ms);
  void close_session(const std::string& session_id, std::int64_t now_ms);
  Acknowledgement submit_rating(const RatingSubmission& submission,
                                std::int64_t now_ms);

  // First assigned task with an unrated applicable construct.
  std::optional<TaskView> next_task(const std::string& evaluator_id) const;
  Progress progress(const std::string& evaluator_id, std::int64_t now_ms) const;

  // Latest-wins, sorted by (evaluator, scenario, system, construct).
  std::vector<RatingRecord> export_ratings() const;

  std::vector<Event> events() const;
  ServiceState state() const;
  const Evaluator* find_evaluator(const std::string& id) const;
  const Bundle& bundle() const noexcept { return *bundle_; }
  const AssignmentPlan& plan() const noexcept { return plan_; }

  // Writes a snapshot now, if a snapshot path is configured.
  void snapshot() const;
  void flush();

 private:
  const Assignment* assignment_of(const std::string& evaluator_id) const;
  void emit(EventType type, std::int64_t now_ms, nlohmann::json payload);
  void expire_if_due(const std::string& evaluator_id, std::int64_t now_ms);
  void write_snapshot_locked() const;

  std::shared_ptr<const Bundle> bundle_;
  AssignmentPlan plan_;
  std::vector<Evaluator> evaluators_;
  ServiceConfig config_;

  mutable std::shared_mutex mu_;
  ServiceState state_;
  std::vector<Event> events_;
  std::unique_ptr<EventLogWriter> writer_;
};

// Applies one event to `state`. Throws std::runtime_error if the event is not
// consistent with the state (which means the log was tampered with).
void apply(ServiceState& state, const Event& event);
ServiceState replay(std::span<const Event> events, ServiceState initial = {});

// Re-checks every accepted rating in the log against the protocol: an active,
// unexpired session of the same evaluator, the evaluator's assignment, an
// applicable construct, and the Likert range. Returns one line per problem.
std::vector<std::string> audit(std::span<const Event> events,
                               const Bundle& bundle, const AssignmentPlan& plan);

}  // namespace helm::session
