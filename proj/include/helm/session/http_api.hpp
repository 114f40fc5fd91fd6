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

// JSON over HTTP for the rating UI. Routes, all under /api/v1:
//
//   GET  /tasks/{evaluator_id}      next task with pending constructs
//   POST /sessions/{evaluator_id}   open a timed session
//   POST /ratings                   submit one construct rating
//   GET  /progress/{evaluator_id}   completed / quota / session state
//   GET  /export                    latest-wins ratings as JSONL
//
// Status codes: 200 ok, 401 bad token, 404 unknown evaluator, 409 expired or
// conflicting session, 422 anything wrong with the request itself.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "helm/session/service.hpp"

namespace httplib {
class Server;
}

namespace helm::session {

using Clock = std::function<std::int64_t()>;

// Wall clock, UTC milliseconds.
std::int64_t system_now_ms();

struct ApiOptions {
  // When set, GET /export requires "Authorization: Bearer <admin_token>".
  // Evaluator routes check the evaluator's own token, if it has one.
  std::optional<std::string> admin_token;
};

nlohmann::ordered_json task_json(const std::string& evaluator_id,
                                 const std::optional<TaskView>& task);
nlohmann::ordered_json progress_json(const std::string& evaluator_id,
                                     const Progress& progress);

class ApiServer {
 public:
  ApiServer(SessionService& service, Clock clock, ApiOptions options = {});
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws
  // std::runtime_error if the port cannot be bound.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  void run();
  void stop();
  void wait_until_ready() const;

 private:
  void install_routes();

  SessionService& service_;
  Clock clock_;
  ApiOptions options_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace helm::session
