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

#include "helm/session/event_log.hpp"

#include <array>
#include <istream>
#include <sstream>

#include "helm/core/errors.hpp"

namespace helm::session {

namespace {

constexpr std::array<std::string_view, 4> kNames = {
    "session_opened", "rating_submitted", "session_expired", "session_closed"};

}  // namespace

std::string_view to_string(EventType t) { return kNames[static_cast<std::size_t>(t)]; }

std::optional<EventType> parse_event_type(std::string_view text) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == text) return static_cast<EventType>(i);
  }
  return std::nullopt;
}

nlohmann::ordered_json to_json(const Event& e) {
  nlohmann::ordered_json j;
  j["seq"] = e.seq;
  j["type"] = std::string(to_string(e.type));
  j["at"] = e.at_ms;
  j["payload"] = nlohmann::ordered_json::parse(e.payload.dump());
  return j;
}

Event event_from_json(const nlohmann::json& j) {
  try {
    Event e;
    e.seq = j.at("seq").get<std::uint64_t>();
    const auto type = parse_event_type(j.at("type").get<std::string>());
    if (!type) throw std::runtime_error("unknown event type");
    e.type = *type;
    e.at_ms = j.at("at").get<std::int64_t>();
    e.payload = j.at("payload");
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw std::runtime_error(std::string("malformed event: ") + ex.what());
  }
}

LogContents read_log(std::istream& in, const std::string& source) {
  LogContents out;
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);

  std::optional<std::uint64_t> last_seq;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const bool last = i + 1 == lines.size();
    if (lines[i].empty()) continue;
    try {
      Event e = event_from_json(nlohmann::json::parse(lines[i]));
      if (last_seq && e.seq <= *last_seq) {
        throw ValidationError({{source, i + 1,
                                "sequence number " + std::to_string(e.seq) +
                                    " does not increase"}});
      }
      last_seq = e.seq;
      out.events.push_back(std::move(e));
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& ex) {
      if (last) {
        out.dropped_partial_tail = true;
        break;
      }
      throw ValidationError({{source, i + 1, ex.what()}});
    }
  }
  return out;
}

LogContents read_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open event log " + path.string());
  return read_log(in, path.string());
}

EventLogWriter::EventLogWriter(const std::filesystem::path& path) : path_(path) {
  if (std::filesystem::exists(path)) {
    // Rewrite the valid prefix so a torn tail never merges with new events.
    auto contents = read_log(path);
    if (contents.dropped_partial_tail) {
      std::ostringstream buf;
      for (const auto& e : contents.events) buf << to_json(e).dump() << '\n';
      std::ofstream rewrite(path, std::ios::trunc);
      rewrite << buf.str();
    }
  }
  out_.open(path, std::ios::app);
  if (!out_) throw IoError("cannot open event log for writing: " + path.string());
}

void EventLogWriter::append(const Event& e) {
  out_ << to_json(e).dump() << '\n';
  out_.flush();
  if (!out_) throw IoError("failed to write event log " + path_.string());
}

void EventLogWriter::flush() { out_.flush(); }

}  // namespace helm::session
