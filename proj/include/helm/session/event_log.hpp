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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace helm::session {

enum class EventType {
  kSessionOpened,
  kRatingSubmitted,
  kSessionExpired,
  kSessionClosed,
};

std::string_view to_string(EventType t);
std::optional<EventType> parse_event_type(std::string_view text);

struct Event {
  std::uint64_t seq = 0;
  EventType type = EventType::kSessionOpened;
  std::int64_t at_ms = 0;
  nlohmann::json payload;

  friend bool operator==(const Event&, const Event&) = default;
};

nlohmann::ordered_json to_json(const Event& e);
// Throws std::runtime_error on a malformed record.
Event event_from_json(const nlohmann::json& j);

struct LogContents {
  std::vector<Event> events;
  // A torn final line (crash mid-write) was discarded.
  bool dropped_partial_tail = false;
};

// Reads an append-only JSONL event log. A malformed last line is treated as a
// torn write and dropped; a malformed earlier line, or sequence numbers that
// do not strictly increase, raise ValidationError.
LogContents read_log(std::istream& in, const std::string& source);
LogContents read_log(const std::filesystem::path& path);

// Append-only JSONL sink. Every append is flushed before returning.
class EventLogWriter {
 public:
  // Truncates a torn tail (if any) so that appends start on a fresh line.
  explicit EventLogWriter(const std::filesystem::path& path);

  void append(const Event& e);
  void flush();
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace helm::session
