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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "helm/core/errors.hpp"
#include "helm/core/io.hpp"
#include "helm/faithfulness/faithfulness.hpp"
#include "helm/session/assignment.hpp"

namespace helm::report {

enum class Format { kJson, kCsv, kMarkdown };
std::string_view to_string(Format f);
std::string_view extension(Format f);
std::optional<Format> parse_format(std::string_view text);

// Item similarity for intra-list diversity: attribute-set Jaccard over the
// catalog, or cosine over embeddings keyed by item_id.
enum class IldSimilarity { kJaccard, kCosine };
std::optional<IldSimilarity> parse_ild_similarity(std::string_view text);

struct RunConfig {
  BundlePaths paths;
  std::optional<std::filesystem::path> rules;
  std::optional<std::filesystem::path> evaluators;
  std::optional<std::filesystem::path> assignments;
  std::optional<std::filesystem::path> event_log;

  std::size_t k = 10;
  std::size_t coverage_k = 100;
  IldSimilarity ild_similarity = IldSimilarity::kJaccard;
  faithfulness::ScoreMode faithfulness_mode = faithfulness::ScoreMode::kVerifiableOnly;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";
  Format format = Format::kJson;

  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::string> admin_token;
  std::int64_t session_limit_ms = 90LL * 60 * 1000;
  std::uint64_t snapshot_every = 100;
  session::AssignmentConfig assignment;
};

// JSON object; relative paths resolve against the config file's directory.
// Throws ValidationError listing every bad field, IoError if unreadable.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json(const nlohmann::json& j,
                           const std::filesystem::path& base_dir,
                           const std::string& source);

// Paths that are set must exist; k and coverage_k must be >= 1.
std::vector<Violation> check_config(const RunConfig& config);

}  // namespace helm::report
