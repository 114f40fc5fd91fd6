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

// Report tables and their three renderings. JSON keeps full precision; CSV
// and Markdown print reals with 2 decimals. Missing values are written as
// null in every format.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "helm/report/config.hpp"

namespace helm::report {

enum class Direction { kNone, kHigherBetter, kLowerBetter };

struct Column {
  std::string name;
  Direction direction = Direction::kNone;
};

using Cell = std::variant<std::monostate, std::string, std::int64_t, double>;

Cell cell(const std::optional<double>& v);

struct Table {
  std::string name;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  std::string name;
  std::vector<Table> tables;
  std::vector<std::string> notes;
};

// Reals formatted for human-readable output ("0.75"); "null" when absent.
std::string format_cell(const Cell& c);

nlohmann::ordered_json to_json(const Table& t);
nlohmann::ordered_json to_json(const Report& r);
std::string render(const Report& r, Format format);

}  // namespace helm::report
