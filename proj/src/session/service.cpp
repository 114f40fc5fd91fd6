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

#include "helm/session/service.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <mutex>
#include <set>

#include "helm/core/constructs.hpp"
#include "helm/core/errors.hpp"

namespace helm::session {

std::string format_iso8601(std::int64_t ms) {
  std::int64_t secs = ms / 1000;
  std::int64_t frac = ms % 1000;
  if (frac < 0) {
    frac += 1000;
    secs -= 1;
  }
  const std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec, static_cast<int>(frac));
  return buf;
}

std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::kActive: return "active";
    case SessionState::kExpired: return "expired";
    case SessionState::kClosed: return "closed";
  }
  return "closed";
}

namespace {

std::optional<SessionState> parse_state(std::string_view s) {
  if (s == "active") return SessionState::kActive;
  if (s == "expired") return SessionState::kExpired;
  if (s == "closed") return SessionState::kClosed;
  return std::nullopt;
}

std::string session_id_for(const std::string& evaluator, int n) {
  return "s-" + evaluator + "-" + std::to_string(n);
}

[[noreturn]] void inconsistent(const Event& e, const std::string& what) {
  throw std::runtime_error("event " + std::to_string(e.seq) + " (" +
                           std::string(to_string(e.type)) + "): " + what);
}

}  // namespace

// ---- state serialization ----

nlohmann::ordered_json to_json(const ServiceState& state) {
  nlohmann::ordered_json j;
  j["last_seq"] = state.last_seq;
  j["accepted_ratings"] = state.accepted_ratings;
  auto sessions = nlohmann::ordered_json::array();
  for (const auto& [id, s] : state.sessions) {
    sessions.push_back({{"session_id", s.session_id},
                        {"evaluator_id", s.evaluator_id},
                        {"started", s.started_ms},
                        {"deadline", s.deadline_ms},
                        {"state", std::string(to_string(s.state))}});
  }
  j["sessions"] = std::move(sessions);
  j["active"] = state.active;
  j["sessions_opened"] = state.sessions_opened;
  auto latest = nlohmann::ordered_json::array();
  for (const auto& [key, r] : state.latest) latest.push_back(to_json(r));
  j["latest"] = std::move(latest);
  return j;
}

ServiceState state_from_json(const nlohmann::json& j) {
  ServiceState s;
  try {
    s.last_seq = j.at("last_seq").get<std::uint64_t>();
    s.accepted_ratings = j.at("accepted_ratings").get<std::uint64_t>();
    for (const auto& x : j.at("sessions")) {
      SessionInfo info;
      info.session_id = x.at("session_id").get<std::string>();
      info.evaluator_id = x.at("evaluator_id").get<std::string>();
      info.started_ms = x.at("started").get<std::int64_t>();
      info.deadline_ms = x.at("deadline").get<std::int64_t>();
      const auto st = parse_state(x.at("state").get<std::string>());
      if (!st) throw std::runtime_error("unknown session state");
      info.state = *st;
      s.sessions.emplace(info.session_id, info);
    }
    s.active = j.at("active").get<std::map<std::string, std::string>>();
    s.sessions_opened = j.at("sessions_opened").get<std::map<std::string, int>>();
    for (const auto& x : j.at("latest")) {
      RatingRecord r = rating_from_json(x);
      s.latest.emplace(key_of(r), std::move(r));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw std::runtime_error(std::string("malformed snapshot: ") + ex.what());
  }
  return s;
}

// ---- replay ----

void apply(ServiceState& state, const Event& e) {
  if (e.seq <= state.last_seq) inconsistent(e, "sequence number does not increase");
  const auto& p = e.payload;
  try {
    switch (e.type) {
      case EventType::kSessionOpened: {
        const auto id = p.at("session_id").get<std::string>();
        const auto ev = p.at("evaluator_id").get<std::string>();
        if (state.active.contains(ev)) inconsistent(e, "evaluator already has an active session");
        if (state.sessions.contains(id)) inconsistent(e, "duplicate session id " + id);
        state.sessions.emplace(
            id, SessionInfo{id, ev, e.at_ms, p.at("deadline").get<std::int64_t>(),
                            SessionState::kActive});
        state.active[ev] = id;
        ++state.sessions_opened[ev];
        break;
      }
      case EventType::kRatingSubmitted: {
        const auto id = p.at("session_id").get<std::string>();
        const auto it = state.sessions.find(id);
        if (it == state.sessions.end()) inconsistent(e, "unknown session " + id);
        if (it->second.state != SessionState::kActive) inconsistent(e, "session not active");
        const auto construct = parse_construct(p.at("construct_id").get<std::string>());
        if (!construct) inconsistent(e, "unknown construct");
        RatingRecord r;
        r.evaluator_id = it->second.evaluator_id;
        r.scenario_id = p.at("scenario_id").get<std::string>();
        r.system_id = p.at("system_id").get<std::string>();
        r.construct = *construct;
        r.value = p.at("value").get<int>();
        r.timestamp_ms = e.at_ms;
        r.session_id = id;
        auto key = key_of(r);
        state.latest[std::move(key)] = std::move(r);
        ++state.accepted_ratings;
        break;
      }
      case EventType::kSessionExpired:
      case EventType::kSessionClosed: {
        const auto id = p.at("session_id").get<std::string>();
        const auto it = state.sessions.find(id);
        if (it == state.sessions.end()) inconsistent(e, "unknown session " + id);
        if (it->second.state != SessionState::kActive) inconsistent(e, "session not active");
        it->second.state = e.type == EventType::kSessionExpired
                               ? SessionState::kExpired
                               : SessionState::kClosed;
        state.active.erase(it->second.evaluator_id);
        break;
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    inconsistent(e, std::string("bad payload: ") + ex.what());
  }
  state.last_seq = e.seq;
}

ServiceState replay(std::span<const Event> events, ServiceState initial) {
  for (const auto& e : events) {
    if (e.seq <= initial.last_seq) continue;
    apply(initial, e);
  }
  return initial;
}

// ---- service ----

SessionService::SessionService(std::shared_ptr<const Bundle> bundle,
                               AssignmentPlan plan,
                               std::vector<Evaluator> evaluators,
                               ServiceConfig config)
    : bundle_(std::move(bundle)),
      plan_(std::move(plan)),
      evaluators_(std::move(evaluators)),
      config_(std::move(config)) {
  if (config_.session_limit_ms <= 0) {
    throw std::invalid_argument("session limit must be positive");
  }
  if (config_.snapshot_path && std::filesystem::exists(*config_.snapshot_path)) {
    std::ifstream in(*config_.snapshot_path);
    state_ = state_from_json(nlohmann::json::parse(in));
  }
  if (config_.log_path) {
    if (std::filesystem::exists(*config_.log_path)) {
      events_ = read_log(*config_.log_path).events;
      if (!events_.empty() && events_.back().seq < state_.last_seq) {
        throw std::runtime_error("snapshot is newer than the event log");
      }
      state_ = replay(events_, std::move(state_));
    }
    writer_ = std::make_unique<EventLogWriter>(*config_.log_path);
  }
}

const Evaluator* SessionService::find_evaluator(const std::string& id) const {
  for (const auto& e : evaluators_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const Assignment* SessionService::assignment_of(const std::string& evaluator_id) const {
  for (const auto& a : plan_.assignments) {
    if (a.evaluator_id == evaluator_id) return &a;
  }
  return nullptr;
}

void SessionService::emit(EventType type, std::int64_t now_ms,
                          nlohmann::json payload) {
  Event e{state_.last_seq + 1, type, now_ms, std::move(payload)};
  ServiceState next = state_;
  apply(next, e);
  // Write-ahead: state changes only once the event is durable.
  if (writer_) writer_->append(e);
  state_ = std::move(next);
  events_.push_back(std::move(e));
  if (config_.snapshot_every > 0 && state_.last_seq % config_.snapshot_every == 0) {
    write_snapshot_locked();
  }
}

void SessionService::expire_if_due(const std::string& evaluator_id,
                                   std::int64_t now_ms) {
  const auto it = state_.active.find(evaluator_id);
  if (it == state_.active.end()) return;
  const auto& s = state_.sessions.at(it->second);
  if (now_ms > s.deadline_ms) {
    emit(EventType::kSessionExpired, now_ms, {{"session_id", s.session_id}});
  }
}

SessionInfo SessionService::open_session(const std::string& evaluator_id,
                                         std::int64_t now_ms) {
  if (!find_evaluator(evaluator_id) || !assignment_of(evaluator_id)) {
    throw ServiceError(ErrorCode::kNotFound, "unknown evaluator " + evaluator_id);
  }
  std::unique_lock lock(mu_);
  expire_if_due(evaluator_id, now_ms);
  if (const auto it = state_.active.find(evaluator_id); it != state_.active.end()) {
    throw ServiceError(ErrorCode::kConflict,
                       "evaluator " + evaluator_id + " already has active session " +
                           it->second);
  }
  const int n = state_.sessions_opened[evaluator_id] + 1;
  const auto id = session_id_for(evaluator_id, n);
  emit(EventType::kSessionOpened, now_ms,
       {{"session_id", id},
        {"evaluator_id", evaluator_id},
        {"deadline", now_ms + config_.session_limit_ms}});
  return state_.sessions.at(id);
}

void SessionService::close_session(const std::string& session_id,
                                   std::int64_t now_ms) {
  std::unique_lock lock(mu_);
  const auto it = state_.sessions.find(session_id);
  if (it == state_.sessions.end()) {
    throw ServiceError(ErrorCode::kNotFound, "unknown session " + session_id);
  }
  const auto evaluator = it->second.evaluator_id;
  expire_if_due(evaluator, now_ms);
  const auto& s = state_.sessions.at(session_id);
  if (s.state == SessionState::kExpired) {
    throw ServiceError(ErrorCode::kExpired, "session " + session_id + " expired");
  }
  if (s.state == SessionState::kClosed) {
    throw ServiceError(ErrorCode::kConflict, "session " + session_id + " already closed");
  }
  emit(EventType::kSessionClosed, now_ms, {{"session_id", session_id}});
}

Acknowledgement SessionService::submit_rating(const RatingSubmission& sub,
                                              std::int64_t now_ms) {
  std::unique_lock lock(mu_);
  const auto it = state_.sessions.find(sub.session_id);
  if (it == state_.sessions.end()) {
    throw ServiceError(ErrorCode::kInvalid, "unknown session " + sub.session_id);
  }
  if (it->second.evaluator_id != sub.evaluator_id) {
    throw ServiceError(ErrorCode::kInvalid, "session " + sub.session_id +
                                                " does not belong to evaluator " +
                                                sub.evaluator_id);
  }
  expire_if_due(sub.evaluator_id, now_ms);
  const auto& session = state_.sessions.at(sub.session_id);
  if (session.state == SessionState::kExpired) {
    throw ServiceError(ErrorCode::kExpired, "session " + sub.session_id +
                                                " expired at " +
                                                format_iso8601(session.deadline_ms));
  }
  if (session.state == SessionState::kClosed) {
    throw ServiceError(ErrorCode::kConflict, "session " + sub.session_id + " is closed");
  }

  const auto construct = parse_construct(sub.construct_id);
  if (!construct) {
    throw ServiceError(ErrorCode::kInvalid, "unknown construct " + sub.construct_id);
  }
  if (sub.value < kLikertMin || sub.value > kLikertMax) {
    throw ServiceError(ErrorCode::kInvalid, "value " + std::to_string(sub.value) +
                                                " outside Likert bounds [1,5]");
  }
  const Assignment* a = assignment_of(sub.evaluator_id);
  if (!a || !a->contains(sub.scenario_id, sub.system_id)) {
    throw ServiceError(ErrorCode::kInvalid, "(" + sub.scenario_id + ", " +
                                                sub.system_id +
                                                ") is not assigned to " +
                                                sub.evaluator_id);
  }
  const Scenario* scenario = bundle_->find_scenario(sub.scenario_id);
  if (!scenario) {
    throw ServiceError(ErrorCode::kInvalid, "unknown scenario " + sub.scenario_id);
  }
  const Transcript* transcript =
      bundle_->find_transcript(sub.scenario_id, sub.system_id);
  if (!is_applicable(*construct, *scenario, transcript, bundle_->applicability)) {
    throw ServiceError(ErrorCode::kInvalid, std::string(to_string(*construct)) +
                                                " does not apply to scenario " +
                                                sub.scenario_id);
  }

  const RatingKey key{sub.evaluator_id, sub.scenario_id, sub.system_id, *construct};
  const bool overwrote = state_.latest.contains(key);
  emit(EventType::kRatingSubmitted, now_ms,
       {{"session_id", sub.session_id},
        {"evaluator_id", sub.evaluator_id},
        {"scenario_id", sub.scenario_id},
        {"system_id", sub.system_id},
        {"construct_id", std::string(to_string(*construct))},
        {"value", sub.value}});
  return {state_.last_seq, overwrote};
}

std::optional<TaskView> SessionService::next_task(
    const std::string& evaluator_id) const {
  const Assignment* a = assignment_of(evaluator_id);
  if (!a) throw ServiceError(ErrorCode::kNotFound, "unknown evaluator " + evaluator_id);
  std::shared_lock lock(mu_);
  for (std::size_t i = 0; i < a->tasks.size(); ++i) {
    const auto& t = a->tasks[i];
    const Scenario* scenario = bundle_->find_scenario(t.scenario_id);
    if (!scenario) continue;
    const Transcript* transcript = bundle_->find_transcript(t.scenario_id, t.system_id);
    TaskView view;
    view.scenario = scenario;
    view.transcript = transcript;
    view.index = static_cast<int>(i);
    view.applicable = applicable_constructs(*scenario, transcript, bundle_->applicability);
    for (auto c : view.applicable) {
      if (!state_.latest.contains(RatingKey{evaluator_id, t.scenario_id, t.system_id, c})) {
        view.pending.push_back(c);
      }
    }
    if (!view.pending.empty()) return view;
  }
  return std::nullopt;
}

Progress SessionService::progress(const std::string& evaluator_id,
                                  std::int64_t now_ms) const {
  const Assignment* a = assignment_of(evaluator_id);
  if (!a) throw ServiceError(ErrorCode::kNotFound, "unknown evaluator " + evaluator_id);
  std::shared_lock lock(mu_);
  Progress p;
  p.total_tasks = static_cast<int>(a->tasks.size());
  p.quota = a->quota;
  for (const auto& t : a->tasks) {
    const Scenario* scenario = bundle_->find_scenario(t.scenario_id);
    if (!scenario) continue;
    const Transcript* transcript = bundle_->find_transcript(t.scenario_id, t.system_id);
    const auto constructs =
        applicable_constructs(*scenario, transcript, bundle_->applicability);
    const bool done = std::all_of(constructs.begin(), constructs.end(), [&](ConstructId c) {
      return state_.latest.contains(RatingKey{evaluator_id, t.scenario_id, t.system_id, c});
    });
    if (done) ++p.completed_tasks;
  }
  if (const auto n = state_.sessions_opened.find(evaluator_id);
      n != state_.sessions_opened.end()) {
    SessionInfo s = state_.sessions.at(session_id_for(evaluator_id, n->second));
    // Reads never write: a due expiry is reported but only logged by the next
    // mutation.
    if (s.state == SessionState::kActive && now_ms > s.deadline_ms) {
      s.state = SessionState::kExpired;
    }
    p.session = s;
  }
  return p;
}

std::vector<RatingRecord> SessionService::export_ratings() const {
  std::shared_lock lock(mu_);
  std::vector<RatingRecord> out;
  out.reserve(state_.latest.size());
  for (const auto& [key, r] : state_.latest) out.push_back(r);
  return out;
}

std::vector<Event> SessionService::events() const {
  std::shared_lock lock(mu_);
  return events_;
}

ServiceState SessionService::state() const {
  std::shared_lock lock(mu_);
  return state_;
}

void SessionService::write_snapshot_locked() const {
  if (!config_.snapshot_path) return;
  const auto tmp = config_.snapshot_path->string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write snapshot " + tmp);
    out << to_json(state_).dump() << '\n';
  }
  std::filesystem::rename(tmp, *config_.snapshot_path);
}

void SessionService::snapshot() const {
  std::shared_lock lock(mu_);
  write_snapshot_locked();
}

void SessionService::flush() {
  std::unique_lock lock(mu_);
  if (writer_) writer_->flush();
}

// ---- audit ----

std::vector<std::string> audit(std::span<const Event> events, const Bundle& bundle,
                               const AssignmentPlan& plan) {
  std::vector<std::string> problems;
  std::map<std::string, const Assignment*> by_evaluator;
  for (const auto& a : plan.assignments) by_evaluator[a.evaluator_id] = &a;

  ServiceState state;
  for (const auto& e : events) {
    const auto where = "event " + std::to_string(e.seq) + ": ";
    if (e.type == EventType::kRatingSubmitted) {
      const auto& p = e.payload;
      const auto sid = p.value("session_id", std::string());
      const auto it = state.sessions.find(sid);
      if (it == state.sessions.end() || it->second.state != SessionState::kActive) {
        problems.push_back(where + "rating outside an active session");
      } else {
        const auto& s = it->second;
        if (e.at_ms > s.deadline_ms) problems.push_back(where + "rating after deadline");
        if (p.value("evaluator_id", std::string()) != s.evaluator_id) {
          problems.push_back(where + "evaluator does not own the session");
        }
        const int value = p.value("value", 0);
        if (value < kLikertMin || value > kLikertMax) {
          problems.push_back(where + "value outside Likert bounds");
        }
        const auto scenario_id = p.value("scenario_id", std::string());
        const auto system_id = p.value("system_id", std::string());
        const auto a = by_evaluator.find(s.evaluator_id);
        if (a == by_evaluator.end() || !a->second->contains(scenario_id, system_id)) {
          problems.push_back(where + "task not in the evaluator's assignment");
        }
        const auto construct = parse_construct(p.value("construct_id", std::string()));
        const Scenario* scenario = bundle.find_scenario(scenario_id);
        if (!construct || !scenario ||
            !is_applicable(*construct, *scenario,
                           bundle.find_transcript(scenario_id, system_id),
                           bundle.applicability)) {
          problems.push_back(where + "construct not applicable");
        }
      }
    }
    try {
      apply(state, e);
    } catch (const std::exception& ex) {
      problems.push_back(ex.what());
      state.last_seq = e.seq;
    }
  }
  return problems;
}

}  // namespace helm::session
