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

#include "helm/report/config.hpp"

#include <fstream>
#include <set>

namespace helm::report {

std::string_view to_string(Format f) {
  switch (f) {
    case Format::kJson: return "json";
    case Format::kCsv: return "csv";
    case Format::kMarkdown: return "md";
  }
  return "json";
}

std::string_view extension(Format f) { return to_string(f); }

std::optional<Format> parse_format(std::string_view text) {
  if (text == "json") return Format::kJson;
  if (text == "csv") return Format::kCsv;
  if (text == "md" || text == "markdown") return Format::kMarkdown;
  return std::nullopt;
}

std::optional<IldSimilarity> parse_ild_similarity(std::string_view text) {
  if (text == "jaccard") return IldSimilarity::kJaccard;
  if (text == "cosine") return IldSimilarity::kCosine;
  return std::nullopt;
}

namespace {

const std::set<std::string> kKnownKeys = {
    "catalog",      "scenarios",  "transcripts",      "ratings",
    "embeddings",   "judgments",  "paraphrases",      "applicability",
    "rules",        "evaluators", "assignments",      "event_log",
    "k",            "coverage_k", "ild_similarity",   "faithfulness_mode",
    "seed",         "out_dir",    "format",           "host",
    "port",         "admin_token", "session_minutes", "snapshot_every",
    "quota",        "quota_min",  "quota_max",        "calibration_fraction",
};

}  // namespace

RunConfig config_from_json(const nlohmann::json& j,
                           const std::filesystem::path& base_dir,
                           const std::string& source) {
  std::vector<Violation> bad;
  auto fail = [&](const std::string& msg) { bad.push_back({source, std::nullopt, msg}); };
  if (!j.is_object()) {
    throw ValidationError({{source, std::nullopt, "config must be a JSON object"}});
  }
  for (const auto& [key, value] : j.items()) {
    if (!kKnownKeys.contains(key)) fail("unknown key '" + key + "'");
  }

  RunConfig c;
  auto path_of = [&](const char* key) -> std::optional<std::filesystem::path> {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) {
      fail(std::string(key) + " must be a path string");
      return std::nullopt;
    }
    std::filesystem::path p = it->get<std::string>();
    return p.is_absolute() ? p : base_dir / p;
  };
  auto integer = [&](const char* key, auto& dst, long long lo) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_number_integer() || it->get<long long>() < lo) {
      fail(std::string(key) + " must be an integer >= " + std::to_string(lo));
      return;
    }
    dst = static_cast<std::remove_reference_t<decltype(dst)>>(it->get<long long>());
  };
  auto text = [&](const char* key) -> std::optional<std::string> {
    const auto it = j.find(key);
    if (it == j.end()) return std::nullopt;
    if (!it->is_string()) {
      fail(std::string(key) + " must be a string");
      return std::nullopt;
    }
    return it->get<std::string>();
  };

  c.paths.catalog = path_of("catalog");
  c.paths.scenarios = path_of("scenarios");
  c.paths.transcripts = path_of("transcripts");
  c.paths.ratings = path_of("ratings");
  c.paths.embeddings = path_of("embeddings");
  c.paths.judgments = path_of("judgments");
  c.paths.paraphrases = path_of("paraphrases");
  c.paths.applicability = path_of("applicability");
  c.rules = path_of("rules");
  c.evaluators = path_of("evaluators");
  c.assignments = path_of("assignments");
  c.event_log = path_of("event_log");
  if (auto p = path_of("out_dir")) c.out_dir = *p;

  integer("k", c.k, 1);
  integer("coverage_k", c.coverage_k, 1);
  integer("seed", c.seed, 0);
  integer("port", c.port, 0);
  integer("snapshot_every", c.snapshot_every, 0);
  integer("quota", c.assignment.quota, 1);
  integer("quota_min", c.assignment.quota_min, 1);
  integer("quota_max", c.assignment.quota_max, 1);
  long long minutes = 90;
  integer("session_minutes", minutes, 1);
  c.session_limit_ms = minutes * 60 * 1000;

  if (const auto it = j.find("calibration_fraction"); it != j.end()) {
    if (!it->is_number() || it->get<double>() < 0.0 || it->get<double>() > 1.0) {
      fail("calibration_fraction must be a number in [0, 1]");
    } else {
      c.assignment.calibration_fraction = it->get<double>();
    }
  }
  if (auto s = text("ild_similarity")) {
    if (auto v = parse_ild_similarity(*s)) c.ild_similarity = *v;
    else fail("ild_similarity must be jaccard or cosine");
  }
  if (auto s = text("faithfulness_mode")) {
    if (auto v = faithfulness::parse_score_mode(*s)) c.faithfulness_mode = *v;
    else fail("faithfulness_mode must be verifiable_only or all_claims");
  }
  if (auto s = text("format")) {
    if (auto v = parse_format(*s)) c.format = *v;
    else fail("format must be json, csv or md");
  }
  if (auto s = text("host")) c.host = *s;
  if (auto s = text("admin_token")) c.admin_token = *s;

  if (!bad.empty()) throw ValidationError(std::move(bad));
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw ValidationError({{path.string(), std::nullopt, "config is not valid JSON"}});
  }
  return config_from_json(j, std::filesystem::absolute(path).parent_path(),
                          path.string());
}

std::vector<Violation> check_config(const RunConfig& c) {
  std::vector<Violation> out;
  auto need = [&](const std::optional<std::filesystem::path>& p, const char* what) {
    if (p && !std::filesystem::exists(*p)) {
      out.push_back({"config", std::nullopt,
                     std::string(what) + " path does not exist: " + p->string()});
    }
  };
  need(c.paths.catalog, "catalog");
  need(c.paths.scenarios, "scenarios");
  need(c.paths.transcripts, "transcripts");
  need(c.paths.ratings, "ratings");
  need(c.paths.embeddings, "embeddings");
  need(c.paths.judgments, "judgments");
  need(c.paths.paraphrases, "paraphrases");
  need(c.paths.applicability, "applicability");
  need(c.rules, "rules");
  need(c.evaluators, "evaluators");
  need(c.assignments, "assignments");
  if (c.k < 1) out.push_back({"config", std::nullopt, "k must be >= 1"});
  if (c.coverage_k < 1) out.push_back({"config", std::nullopt, "coverage_k must be >= 1"});
  return out;
}

}  // namespace helm::report
