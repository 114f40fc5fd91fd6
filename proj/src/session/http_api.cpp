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

#include "helm/session/http_api.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <stdexcept>

#include <httplib.h>

#include "helm/core/constructs.hpp"
#include "helm/core/io.hpp"

namespace helm::session {

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message) {
  nlohmann::ordered_json body;
  body["error"] = std::string(code);
  body["message"] = message;
  send_json(res, status, body);
}

void send_service_error(httplib::Response& res, const ServiceError& e) {
  switch (e.code()) {
    case ErrorCode::kConflict: return send_error(res, 409, "conflict", e.what());
    case ErrorCode::kExpired: return send_error(res, 409, "expired", e.what());
    case ErrorCode::kInvalid: return send_error(res, 422, "invalid", e.what());
    case ErrorCode::kNotFound: return send_error(res, 404, "not_found", e.what());
    case ErrorCode::kForbidden: return send_error(res, 401, "unauthorized", e.what());
  }
}

std::optional<std::string> bearer(const httplib::Request& req) {
  const auto h = req.get_header_value("Authorization");
  constexpr std::string_view prefix = "Bearer ";
  if (h.size() <= prefix.size() || h.compare(0, prefix.size(), prefix) != 0) {
    return std::nullopt;
  }
  return h.substr(prefix.size());
}

nlohmann::ordered_json construct_json(ConstructId c) {
  const auto& s = schema_of(c);
  nlohmann::ordered_json j;
  j["construct_id"] = std::string(s.code);
  j["dimension"] = std::string(to_string(s.dimension));
  j["label"] = std::string(s.label);
  j["definition"] = std::string(s.definition);
  return j;
}

nlohmann::ordered_json anchors_json() {
  auto a = nlohmann::ordered_json::array();
  for (int v = kLikertMin; v <= kLikertMax; ++v) {
    a.push_back({{"value", v},
                 {"text", std::string(anchor_text(v))},
                 {"description", std::string(anchor_description(v))}});
  }
  return a;
}

// Required string field of a rating body, or nullopt.
std::optional<std::string> string_field(const nlohmann::json& body, const char* name) {
  const auto it = body.find(name);
  if (it == body.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

std::int64_t system_now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

nlohmann::ordered_json task_json(const std::string& evaluator_id,
                                 const std::optional<TaskView>& task) {
  nlohmann::ordered_json j;
  j["evaluator_id"] = evaluator_id;
  if (!task) {
    j["done"] = true;
    return j;
  }
  j["done"] = false;
  j["task_index"] = task->index;
  j["scenario"] = to_json(*task->scenario);
  j["transcript"] = task->transcript ? to_json(*task->transcript)
                                     : nlohmann::ordered_json(nullptr);
  auto applicable = nlohmann::ordered_json::array();
  for (auto c : task->applicable) {
    auto cj = construct_json(c);
    cj["rated"] = std::find(task->pending.begin(), task->pending.end(), c) ==
                  task->pending.end();
    applicable.push_back(std::move(cj));
  }
  j["applicable_constructs"] = std::move(applicable);
  j["anchors"] = anchors_json();
  return j;
}

nlohmann::ordered_json progress_json(const std::string& evaluator_id,
                                     const Progress& p) {
  nlohmann::ordered_json j;
  j["evaluator_id"] = evaluator_id;
  j["completed"] = p.completed_tasks;
  j["quota"] = p.total_tasks;
  j["quota_scenarios"] = p.quota;
  if (p.session) {
    j["session_state"] = std::string(to_string(p.session->state));
    j["session_id"] = p.session->session_id;
    j["deadline"] = format_iso8601(p.session->deadline_ms);
  } else {
    j["session_state"] = "none";
    j["session_id"] = nullptr;
    j["deadline"] = nullptr;
  }
  return j;
}

ApiServer::ApiServer(SessionService& service, Clock clock, ApiOptions options)
    : service_(service),
      clock_(clock ? std::move(clock) : Clock(system_now_ms)),
      options_(std::move(options)),
      server_(std::make_unique<httplib::Server>()) {
  // httplib defaults to SO_REUSEPORT, which lets a second server share a busy
  // port. We want that bind to fail.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes),
               sizeof(yes));
  });
  install_routes();
}

ApiServer::~ApiServer() { stop(); }

void ApiServer::install_routes() {
  auto& srv = *server_;

  // Evaluator routes: unknown evaluator -> 404, token mismatch -> 401.
  auto authorize = [this](const httplib::Request& req, httplib::Response& res,
                          const std::string& evaluator_id) {
    const Evaluator* ev = service_.find_evaluator(evaluator_id);
    if (!ev) {
      send_error(res, 404, "not_found", "unknown evaluator " + evaluator_id);
      return false;
    }
    if (ev->token && bearer(req) != ev->token) {
      send_error(res, 401, "unauthorized", "missing or wrong evaluator token");
      return false;
    }
    return true;
  };

  srv.Get(R"(/api/v1/tasks/([^/]+))", [this, authorize](const httplib::Request& req,
                                                        httplib::Response& res) {
    const std::string id = req.matches[1];
    if (!authorize(req, res, id)) return;
    try {
      send_json(res, 200, task_json(id, service_.next_task(id)));
    } catch (const ServiceError& e) {
      send_service_error(res, e);
    }
  });

  srv.Post(R"(/api/v1/sessions/([^/]+))", [this, authorize](const httplib::Request& req,
                                                           httplib::Response& res) {
    const std::string id = req.matches[1];
    if (!authorize(req, res, id)) return;
    try {
      const auto s = service_.open_session(id, clock_());
      nlohmann::ordered_json j;
      j["session_id"] = s.session_id;
      j["evaluator_id"] = s.evaluator_id;
      j["started"] = format_iso8601(s.started_ms);
      j["deadline"] = format_iso8601(s.deadline_ms);
      send_json(res, 200, j);
    } catch (const ServiceError& e) {
      send_service_error(res, e);
    }
  });

  srv.Post("/api/v1/ratings", [this, authorize](const httplib::Request& req,
                                               httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
      return send_error(res, 422, "invalid", "body is not a JSON object");
    }
    RatingSubmission sub;
    std::vector<std::string> missing;
    auto take = [&](const char* name, std::string& dst) {
      if (auto v = string_field(body, name)) {
        dst = *v;
      } else {
        missing.emplace_back(name);
      }
    };
    take("session_id", sub.session_id);
    take("evaluator_id", sub.evaluator_id);
    take("scenario_id", sub.scenario_id);
    take("system_id", sub.system_id);
    take("construct_id", sub.construct_id);
    const auto v = body.find("value");
    if (v == body.end() || !v->is_number_integer()) {
      missing.emplace_back("value");
    } else {
      sub.value = v->get<int>();
    }
    if (!missing.empty()) {
      std::string msg = "missing or mistyped fields:";
      for (const auto& m : missing) msg += " " + m;
      return send_error(res, 422, "invalid", msg);
    }
    if (!authorize(req, res, sub.evaluator_id)) return;
    try {
      const auto ack = service_.submit_rating(sub, clock_());
      nlohmann::ordered_json j;
      j["accepted"] = true;
      j["seq"] = ack.seq;
      j["overwrote"] = ack.overwrote;
      send_json(res, 200, j);
    } catch (const ServiceError& e) {
      send_service_error(res, e);
    }
  });

  srv.Get(R"(/api/v1/progress/([^/]+))", [this, authorize](const httplib::Request& req,
                                                          httplib::Response& res) {
    const std::string id = req.matches[1];
    if (!authorize(req, res, id)) return;
    try {
      send_json(res, 200, progress_json(id, service_.progress(id, clock_())));
    } catch (const ServiceError& e) {
      send_service_error(res, e);
    }
  });

  srv.Get("/api/v1/export", [this](const httplib::Request& req, httplib::Response& res) {
    if (options_.admin_token && bearer(req) != options_.admin_token) {
      return send_error(res, 401, "unauthorized", "missing or wrong admin token");
    }
    std::ostringstream out;
    write_ratings(out, service_.export_ratings());
    res.status = 200;
    res.set_content(out.str(), "application/x-ndjson");
  });
}

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = server_->bind_to_any_port(host);
    if (p <= 0) throw std::runtime_error("cannot bind to " + host);
    return p;
  }
  if (!server_->bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind to " + host + ":" + std::to_string(port) +
                             " (port in use?)");
  }
  return port;
}

void ApiServer::run() { server_->listen_after_bind(); }

void ApiServer::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

void ApiServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace helm::session
