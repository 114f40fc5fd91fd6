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

#include "helm/report/table.hpp"

#include <cmath>

#include <fmt/format.h>

namespace helm::report {

namespace {

std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::kHigherBetter: return "higher_better";
    case Direction::kLowerBetter: return "lower_better";
    case Direction::kNone: break;
  }
  return "none";
}

std::string header_with_arrow(const Column& c) {
  switch (c.direction) {
    case Direction::kHigherBetter: return c.name + " ↑";
    case Direction::kLowerBetter: return c.name + " ↓";
    case Direction::kNone: break;
  }
  return c.name;
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  if (std::holds_alternative<std::int64_t>(c)) return std::get<std::int64_t>(c);
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    if (std::isfinite(v)) return v;
  }
  return nullptr;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string md_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '|') out += '\\';
    out += ch;
  }
  return out;
}

}  // namespace

Cell cell(const std::optional<double>& v) {
  if (!v) return std::monostate{};
  return *v;
}

std::string format_cell(const Cell& c) {
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  if (std::holds_alternative<std::int64_t>(c)) {
    return std::to_string(std::get<std::int64_t>(c));
  }
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    if (!std::isfinite(v)) return "null";
    // Avoid "-0.00".
    const double r = std::round(v * 100.0) / 100.0;
    return fmt::format("{:.2f}", r == 0.0 ? 0.0 : r);
  }
  return "null";
}

nlohmann::ordered_json to_json(const Table& t) {
  nlohmann::ordered_json j;
  j["name"] = t.name;
  auto cols = nlohmann::ordered_json::array();
  for (const auto& c : t.columns) {
    cols.push_back({{"name", c.name}, {"direction", std::string(direction_name(c.direction))}});
  }
  j["columns"] = std::move(cols);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      r[t.columns[i].name] = i < row.size() ? cell_json(row[i]) : nullptr;
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["report"] = r.name;
  auto tables = nlohmann::ordered_json::array();
  for (const auto& t : r.tables) tables.push_back(to_json(t));
  j["tables"] = std::move(tables);
  j["notes"] = r.notes;
  return j;
}

std::string render(const Report& r, Format format) {
  std::string out;
  switch (format) {
    case Format::kJson:
      return to_json(r).dump(2) + "\n";
    case Format::kCsv:
      for (std::size_t ti = 0; ti < r.tables.size(); ++ti) {
        const auto& t = r.tables[ti];
        if (ti > 0) out += "\n";
        out += "# " + t.name + "\n";
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
          if (i > 0) out += ",";
          out += csv_escape(t.columns[i].name);
        }
        out += "\n";
        for (const auto& row : t.rows) {
          for (std::size_t i = 0; i < t.columns.size(); ++i) {
            if (i > 0) out += ",";
            out += csv_escape(i < row.size() ? format_cell(row[i]) : "null");
          }
          out += "\n";
        }
      }
      for (const auto& n : r.notes) out += "# note: " + n + "\n";
      return out;
    case Format::kMarkdown:
      out += "# " + r.name + "\n";
      for (const auto& t : r.tables) {
        out += "\n## " + t.name + "\n\n|";
        for (const auto& c : t.columns) out += " " + md_escape(header_with_arrow(c)) + " |";
        out += "\n|";
        for (std::size_t i = 0; i < t.columns.size(); ++i) out += " --- |";
        out += "\n";
        for (const auto& row : t.rows) {
          out += "|";
          for (std::size_t i = 0; i < t.columns.size(); ++i) {
            out += " " + md_escape(i < row.size() ? format_cell(row[i]) : "null") + " |";
          }
          out += "\n";
        }
      }
      if (!r.notes.empty()) {
        out += "\n## Notes\n\n";
        for (const auto& n : r.notes) out += "- " + md_escape(n) + "\n";
      }
      return out;
  }
  return out;
}

}  // namespace helm::report
