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

#include <atomic>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "helm/report/commands.hpp"
#include "helm/session/http_api.hpp"
#include "support/fixtures.hpp"

namespace helm::session {
namespace {

using nlohmann::json;
using testing::TempDir;

constexpr std::int64_t kT0 = 1767225600000;
const std::string kData = HELM_TEST_DATA;

// A service plus a live server on an ephemeral port with a settable clock.
class Harness {
 public:
  explicit Harness(std::optional<std::filesystem::path> log = std::nullopt,
                   std::optional<std::string> admin = std::nullopt) {
    bundle_ = testing::session_bundle(10);
    evaluators_ = testing::panel(4);
    evaluators_[1].token = "tok-e2";
    plan_ = build_assignments(bundle_->scenarios, std::vector<std::string>{"A", "B"},
                              evaluators_, testing::small_quota(5), 5);
    ServiceConfig cfg;
    cfg.log_path = std::move(log);
    service_ = std::make_unique<SessionService>(bundle_, plan_, evaluators_, cfg);
    server_ = std::make_unique<ApiServer>(
        *service_, [this] { return now_.load(); }, ApiOptions{std::move(admin)});
    port_ = server_->bind("127.0.0.1", 0);
    runner_ = std::thread([this] { server_->run(); });
    server_->wait_until_ready();
  }
  ~Harness() {
    server_->stop();
    runner_.join();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(10, 0);
    return c;
  }
  int port() const { return port_; }
  const AssignmentPlan& plan() const { return plan_; }
  SessionService& service() { return *service_; }
  void set_now(std::int64_t ms) { now_ = ms; }

 private:
  std::shared_ptr<const Bundle> bundle_;
  std::vector<Evaluator> evaluators_;
  AssignmentPlan plan_;
  std::unique_ptr<SessionService> service_;
  std::unique_ptr<ApiServer> server_;
  std::atomic<std::int64_t> now_{kT0};
  int port_ = 0;
  std::thread runner_;
};

json rating_body(const std::string& session, const std::string& evaluator, const Task& t,
                 const std::string& construct, int value) {
  return {{"session_id", session}, {"evaluator_id", evaluator}, {"scenario_id", t.scenario_id},
          {"system_id", t.system_id}, {"construct_id", construct}, {"value", value}};
}

httplib::Result post_json(httplib::Client& c, const std::string& path, const json& body,
                          const httplib::Headers& h = {}) {
  return c.Post(path, h, body.dump(), "application/json");
}

std::string open(httplib::Client& c, const std::string& evaluator,
                 const httplib::Headers& h = {}) {
  auto res = c.Post("/api/v1/sessions/" + evaluator, h, "", "application/json");
  EXPECT_TRUE(res);
  EXPECT_EQ(res->status, 200) << res->body;
  return json::parse(res->body).at("session_id").get<std::string>();
}

TEST(Http, StatusCodes) {
  Harness h;
  auto c = h.client();
  const auto& task = h.plan().assignments[0].tasks[0];

  auto tasks = c.Get("/api/v1/tasks/e1");
  ASSERT_TRUE(tasks);
  EXPECT_EQ(tasks->status, 200);
  const auto tj = json::parse(tasks->body);
  EXPECT_FALSE(tj["done"].get<bool>());
  EXPECT_EQ(tj["applicable_constructs"].size(), kNumConstructs);
  EXPECT_EQ(tj["anchors"].size(), 5u);

  EXPECT_EQ(c.Get("/api/v1/tasks/nobody")->status, 404);
  EXPECT_EQ(c.Get("/api/v1/tasks/e2")->status, 401);
  EXPECT_EQ(c.Get("/api/v1/tasks/e2", {{"Authorization", "Bearer tok-e2"}})->status, 200);

  const auto session = open(c, "e1");
  EXPECT_EQ(c.Post("/api/v1/sessions/e1", "", "application/json")->status, 409);

  auto ok = post_json(c, "/api/v1/ratings", rating_body(session, "e1", task, "EIS", 4));
  ASSERT_TRUE(ok);
  EXPECT_EQ(ok->status, 200) << ok->body;
  EXPECT_FALSE(json::parse(ok->body)["overwrote"].get<bool>());
  auto again = post_json(c, "/api/v1/ratings", rating_body(session, "e1", task, "EIS", 5));
  EXPECT_TRUE(json::parse(again->body)["overwrote"].get<bool>());

  EXPECT_EQ(post_json(c, "/api/v1/ratings", rating_body(session, "e1", task, "EIS", 9))->status,
            422);
  EXPECT_EQ(post_json(c, "/api/v1/ratings", rating_body(session, "e1", task, "XYZ", 3))->status,
            422);
  EXPECT_EQ(c.Post("/api/v1/ratings", "{not json", "application/json")->status, 422);
  EXPECT_EQ(post_json(c, "/api/v1/ratings", json{{"session_id", session}})->status, 422);

  // Past the deadline the same session answers 409.
  h.set_now(kT0 + kDefaultSessionLimitMs + 1);
  auto late = post_json(c, "/api/v1/ratings", rating_body(session, "e1", task, "EIS", 3));
  EXPECT_EQ(late->status, 409);
  EXPECT_EQ(json::parse(late->body)["error"], "expired");

  auto progress = c.Get("/api/v1/progress/e1");
  ASSERT_EQ(progress->status, 200);
  const auto pj = json::parse(progress->body);
  EXPECT_EQ(pj["session_state"], "expired");
  EXPECT_EQ(pj["completed"], 0);

  auto exported = c.Get("/api/v1/export");
  ASSERT_EQ(exported->status, 200);
  std::istringstream lines(exported->body);
  const auto parsed = parse_ratings(lines, "export");
  ASSERT_TRUE(parsed.violations.empty());
  ASSERT_EQ(parsed.value.size(), 1u);
  EXPECT_EQ(parsed.value[0].value, 5);
}

TEST(Http, ExportNeedsAdminTokenWhenConfigured) {
  Harness h(std::nullopt, "admin-secret");
  auto c = h.client();
  EXPECT_EQ(c.Get("/api/v1/export")->status, 401);
  EXPECT_EQ(c.Get("/api/v1/export", {{"Authorization", "Bearer admin-secret"}})->status, 200);
}

TEST(Http, ConcurrentEvaluatorsEachAcceptedOnce) {
  TempDir dir;
  Harness h(dir / "events.jsonl");
  std::atomic<int> accepted{0}, failures{0};
  int expected = 0;
  for (const auto& a : h.plan().assignments) expected += static_cast<int>(a.tasks.size()) * 2;

  std::vector<std::thread> threads;
  for (std::size_t e = 0; e < 4; ++e) {
    threads.emplace_back([&, e] {
      auto c = h.client();
      const auto& a = h.plan().assignments[e];
      httplib::Headers auth;
      if (a.evaluator_id == "e2") auth = {{"Authorization", "Bearer tok-e2"}};
      const auto session = open(c, a.evaluator_id, auth);
      for (const auto& t : a.tasks) {
        for (const char* construct : {"EIS", "FAI"}) {
          auto res = post_json(c, "/api/v1/ratings",
                               rating_body(session, a.evaluator_id, t, construct, 3), auth);
          if (res && res->status == 200) {
            ++accepted;
          } else {
            ++failures;
          }
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(failures.load(), 0);
  EXPECT_EQ(accepted.load(), expected);
  EXPECT_EQ(h.service().export_ratings().size(), static_cast<std::size_t>(expected));

  // Sequence numbers are dense and unique.
  const auto events = h.service().events();
  for (std::size_t i = 0; i < events.size(); ++i) EXPECT_EQ(events[i].seq, i + 1);
  EXPECT_TRUE(audit(events, h.service().bundle(), h.plan()).empty());
}

TEST(Http, RestartReplaysTheLog) {
  TempDir dir;
  std::string before;
  {
    Harness h(dir / "events.jsonl");
    auto c = h.client();
    const auto session = open(c, "e1");
    for (const auto& t : h.plan().assignments[0].tasks) {
      ASSERT_EQ(post_json(c, "/api/v1/ratings", rating_body(session, "e1", t, "ATR", 4))->status,
                200);
    }
    h.service().flush();
    before = c.Get("/api/v1/export")->body;
  }
  Harness h(dir / "events.jsonl");
  auto c = h.client();
  EXPECT_EQ(c.Get("/api/v1/export")->body, before);
  // The session survived the restart and still blocks a second one.
  EXPECT_EQ(c.Post("/api/v1/sessions/e1", "", "application/json")->status, 409);
}

TEST(Http, PortInUseIsAnError) {
  Harness h;
  auto bundle = testing::session_bundle();
  SessionService other(bundle, h.plan(), testing::panel(4), {});
  ApiServer second(other, {});
  EXPECT_THROW(second.bind("127.0.0.1", h.port()), std::runtime_error);
}

TEST(Http, InvalidBundleRefusesToServe) {
  auto config = report::load_config(kData + "/dangling/run.json");
  TempDir dir;
  config.out_dir = dir.path();
  config.port = 0;
  std::ostringstream out, err;
  bool ready = false;
  const int code = report::cmd_serve(
      config, out, err, [] {}, [&](int) { ready = true; });
  EXPECT_EQ(code, report::kExitValidation);
  EXPECT_FALSE(ready);
  EXPECT_NE(err.str().find("refusing"), std::string::npos);
}

}  // namespace
}  // namespace helm::session
