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

// Random operation sequences against SessionService, checked three ways:
// every accept/reject decision against a tiny protocol model kept here, the
// state after a restart from a truncated (possibly torn) log against the live
// state recorded at that point, and the exported ratings against their
// sessions' deadlines.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helm/core/constructs.hpp"
#include "helm/session/service.hpp"
#include "support/fixtures.hpp"

namespace helm::testing {

struct ReplayResult {
  bool ok = true;
  std::string failure;
  int ops = 0;
  int accepted = 0;
  int rejected = 0;
  int expirations = 0;
  int restarts = 0;
};

namespace detail {

struct ModelSession {
  std::string evaluator;
  std::int64_t deadline = 0;
  bool open = true;
};

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace detail

// One sequence of `n_ops` operations for seed `seed`, run in `dir`.
inline ReplayResult run_replay_case(std::uint64_t seed, const std::filesystem::path& dir,
                                    int n_ops = 60) {
  using namespace helm::session;
  ReplayResult res;
  auto fail = [&](const std::string& why) {
    if (res.ok) {
      res.ok = false;
      res.failure = "seed " + std::to_string(seed) + ": " + why;
    }
  };

  std::mt19937_64 rng(seed);
  auto uni = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };

  const auto bundle = session_bundle(6);
  const std::vector<std::string> systems{"A", "B"};
  const auto evaluators = panel(3);
  const auto plan = build_assignments(bundle->scenarios, systems, evaluators, small_quota(4),
                                      seed);
  const std::int64_t limit = 30LL * 60 * 1000;

  const auto log_path = dir / "events.jsonl";
  const auto snap_path = dir / "state.snapshot";
  std::filesystem::remove(log_path);
  std::filesystem::remove(snap_path);

  ServiceConfig cfg;
  cfg.session_limit_ms = limit;
  cfg.log_path = log_path;
  cfg.snapshot_path = snap_path;
  cfg.snapshot_every = seed % 2 == 0 ? 7 : 0;

  auto svc = std::make_unique<SessionService>(bundle, plan, evaluators, cfg);

  std::map<std::string, detail::ModelSession> sessions;
  std::map<std::string, std::string> active;  // evaluator -> session
  std::map<std::uint64_t, ServiceState> recorded;
  recorded[0] = svc->state();

  auto tasks_of = [&](const std::string& ev) -> const std::vector<Task>& {
    for (const auto& a : plan.assignments) {
      if (a.evaluator_id == ev) return a.tasks;
    }
    static const std::vector<Task> none;
    return none;
  };
  // Lazy expiry: an overdue open session counts as closed from now on.
  auto model_expire = [&](const std::string& ev, std::int64_t now) {
    const auto it = active.find(ev);
    if (it != active.end() && now > sessions[it->second].deadline) {
      sessions[it->second].open = false;
      active.erase(it);
    }
  };

  std::int64_t now = 1'760'000'000'000;
  for (int op = 0; op < n_ops && res.ok; ++op) {
    ++res.ops;
    const int clock_kind = static_cast<int>(uni(0, 9));
    if (clock_kind < 6) {
      now += uni(0, 60'000);
    } else if (clock_kind < 8) {
      now += uni(0, 10 * 60'000);
    } else if (clock_kind < 9) {
      now += uni(0, 40 * 60'000);
    } else if (!active.empty()) {
      // Land exactly on, or one tick past, some active deadline.
      auto it = active.begin();
      std::advance(it, uni(0, static_cast<std::int64_t>(active.size()) - 1));
      now = std::max(now, sessions[it->second].deadline + uni(0, 1));
    }

    const std::string ev = "e" + std::to_string(uni(1, 4));  // e4 is unknown
    const bool known = ev != "e4";
    const int kind = static_cast<int>(uni(0, 99));

    if (kind < 20) {
      model_expire(ev, now);
      const bool expect_ok = known && !active.contains(ev);
      try {
        const auto info = svc->open_session(ev, now);
        if (!expect_ok) fail("open accepted for " + ev + " but model rejects");
        if (info.deadline_ms != now + limit) fail("deadline is not start + limit");
        if (sessions.contains(info.session_id)) fail("session id reused");
        sessions[info.session_id] = {ev, info.deadline_ms, true};
        active[ev] = info.session_id;
      } catch (const ServiceError& e) {
        if (expect_ok) fail(std::string("open rejected: ") + e.what());
        const auto want = known ? ErrorCode::kConflict : ErrorCode::kNotFound;
        if (e.code() != want) fail("open rejected with the wrong code");
      }
    } else if (kind < 30) {
      if (!active.contains(ev)) continue;
      const auto sid = active[ev];
      try {
        svc->close_session(sid, now);
        model_expire(ev, now);
        // Closing an overdue session expires it instead; either way it ends.
        if (active.contains(ev)) {
          sessions[sid].open = false;
          active.erase(ev);
        }
      } catch (const ServiceError& e) {
        model_expire(ev, now);
        if (active.contains(ev)) fail(std::string("close rejected: ") + e.what());
      }
    } else {
      RatingSubmission sub;
      sub.evaluator_id = ev;
      const int sid_kind = static_cast<int>(uni(0, 9));
      if (sid_kind < 7 && active.contains(ev)) {
        sub.session_id = active[ev];
      } else if (sid_kind < 9 && !sessions.empty()) {
        auto it = sessions.begin();
        std::advance(it, uni(0, static_cast<std::int64_t>(sessions.size()) - 1));
        sub.session_id = it->first;
      } else {
        sub.session_id = "s-nope";
      }
      const auto& tasks = tasks_of(ev);
      if (!tasks.empty() && uni(0, 9) < 8) {
        const auto& t = tasks[static_cast<std::size_t>(
            uni(0, static_cast<std::int64_t>(tasks.size()) - 1))];
        sub.scenario_id = t.scenario_id;
        sub.system_id = t.system_id;
      } else {
        sub.scenario_id = "q" + std::to_string(uni(0, 6));  // q6 does not exist
        sub.system_id = uni(0, 1) ? "A" : "B";
      }
      sub.construct_id = uni(0, 19) == 0
                             ? std::string("XYZ")
                             : std::string(to_string(static_cast<ConstructId>(uni(0, 19))));
      sub.value = uni(0, 9) == 0 ? static_cast<int>(uni(-1, 7)) : static_cast<int>(uni(1, 5));

      // Expiry is checked against the session named in the request.
      const auto ms = sessions.find(sub.session_id);
      bool expect_ok = ms != sessions.end() && ms->second.evaluator == ev;
      if (expect_ok) {
        model_expire(ev, now);
        expect_ok = ms->second.open && now <= ms->second.deadline;
      }
      bool in_plan = false;
      for (const auto& t : tasks) {
        in_plan |= t.scenario_id == sub.scenario_id && t.system_id == sub.system_id;
      }
      expect_ok = expect_ok && in_plan && sub.construct_id != "XYZ" &&
                  sub.value >= kLikertMin && sub.value <= kLikertMax;
      try {
        svc->submit_rating(sub, now);
        ++res.accepted;
        if (!expect_ok) {
          fail("rating accepted but model rejects (session " + sub.session_id + ", " +
               sub.scenario_id + "/" + sub.system_id + "/" + sub.construct_id + "=" +
               std::to_string(sub.value) + ")");
        }
      } catch (const ServiceError& e) {
        ++res.rejected;
        if (expect_ok) fail(std::string("rating rejected: ") + e.what());
      }
    }
    const auto st = svc->state();
    recorded[st.last_seq] = st;
  }
  if (!res.ok) return res;

  const auto live = svc->state();
  const auto live_events = svc->events();
  svc->flush();
  for (const auto& e : live_events) {
    res.expirations += e.type == EventType::kSessionExpired;
  }

  // Every accepted rating lies inside its session window.
  for (const auto& e : live_events) {
    if (e.type != EventType::kRatingSubmitted) continue;
    const auto& s = live.sessions.at(e.payload.at("session_id").get<std::string>());
    if (e.at_ms > s.deadline_ms || e.at_ms < s.started_ms) {
      fail("rating at seq " + std::to_string(e.seq) + " outside its session window");
    }
  }
  for (const auto& r : svc->export_ratings()) {
    const auto& s = live.sessions.at(r.session_id);
    if (r.timestamp_ms > s.deadline_ms) fail("exported rating after its deadline");
  }
  if (const auto problems = audit(live_events, *bundle, plan); !problems.empty()) {
    fail("audit: " + problems.front());
  }

  svc.reset();
  const std::string full_log = slurp(log_path);
  const auto lines = detail::split_lines(full_log);
  if (lines.size() != live.last_seq) fail("log line count differs from last seq");

  // Full restart, snapshot included.
  {
    SessionService again(bundle, plan, evaluators, cfg);
    ++res.restarts;
    if (!(again.state() == live)) fail("state after full restart differs");
    if (!(again.export_ratings() == SessionService(bundle, plan, evaluators,
                                                   ServiceConfig{limit, log_path, {}, 0})
                                        .export_ratings())) {
      fail("export differs between snapshot and log-only restart");
    }
  }

  // Crash points: cut the log at recorded boundaries, sometimes mid-line.
  std::vector<std::uint64_t> cuts;
  for (const auto& [seq, st] : recorded) cuts.push_back(seq);
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(std::min<std::size_t>(cuts.size(), 4));
  const auto cut_path = dir / "cut.jsonl";
  for (const auto seq : cuts) {
    std::string text;
    for (std::size_t i = 0; i < seq; ++i) text += lines[i] + "\n";
    const bool torn = seq < lines.size() && uni(0, 1) == 1;
    if (torn) {
      const auto& next = lines[seq];
      text += next.substr(0, static_cast<std::size_t>(
                                 uni(1, static_cast<std::int64_t>(next.size()) - 1)));
    }
    {
      std::ofstream out(cut_path, std::ios::binary | std::ios::trunc);
      out << text;
    }
    ServiceConfig cut_cfg{limit, cut_path, {}, 0};
    try {
      SessionService restarted(bundle, plan, evaluators, cut_cfg);
      ++res.restarts;
      if (!(restarted.state() == recorded.at(seq))) {
        fail("state after restart at seq " + std::to_string(seq) +
             (torn ? " (torn tail)" : "") + " differs from live state");
      }
      // The log must stay appendable after a torn tail is discarded.
      if (torn && !plan.assignments.empty()) {
        const auto st = restarted.state();
        const auto& ev = plan.assignments.front().evaluator_id;
        if (!st.active.contains(ev)) {
          restarted.open_session(ev, now + 10 * limit);
          restarted.flush();
          const auto reread = read_log(cut_path);
          if (reread.dropped_partial_tail || reread.events.size() != seq + 1) {
            fail("log not cleanly appendable after torn tail");
          }
        }
      }
    } catch (const std::exception& e) {
      fail("restart at seq " + std::to_string(seq) + " threw: " + e.what());
    }
  }
  return res;
}

}  // namespace helm::testing
