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

#include "helm/core/io.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "helm/core/text.hpp"

namespace helm {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// ---- field access helpers; all throw std::runtime_error with the field name

const json& field(const json& j, const char* name) {
  if (!j.is_object()) throw std::runtime_error("record is not a JSON object");
  auto it = j.find(name);
  if (it == j.end()) {
    throw std::runtime_error(std::string("missing field '") + name + "'");
  }
  return *it;
}

std::string string_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_string()) {
    throw std::runtime_error(std::string("field '") + name +
                             "' must be a string");
  }
  return v.get<std::string>();
}

std::string nonempty_string_field(const json& j, const char* name) {
  std::string s = string_field(j, name);
  if (s.empty()) {
    throw std::runtime_error(std::string("field '") + name +
                             "' must be nonempty");
  }
  return s;
}

std::optional<std::string> optional_string(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw std::runtime_error(std::string("field '") + name +
                             "' must be a string");
  }
  return it->get<std::string>();
}

std::int64_t integer_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer()) {
    throw std::runtime_error(std::string("field '") + name +
                             "' must be an integer");
  }
  return v.get<std::int64_t>();
}

std::vector<std::string> string_array(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_array()) {
    throw std::runtime_error(std::string("field '") + name +
                             "' must be an array");
  }
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) {
      throw std::runtime_error(std::string("field '") + name +
                               "' must contain only strings");
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

void require_only(const json& j, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw std::runtime_error("unexpected field '" + key + "'");
  }
}

// Iterates non-blank lines, handing each parsed JSON object to `fn`. Parse
// failures become violations.
template <typename Fn>
void for_each_jsonl(std::istream& in, const std::string& source,
                    std::vector<Violation>& violations, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      violations.push_back({source, line_no,
                            std::string("malformed JSON: ") + e.what()});
      continue;
    }
    try {
      fn(j, line_no);
    } catch (const std::exception& e) {
      violations.push_back({source, line_no, e.what()});
    }
  }
}

// Reads a whole-document JSON array; each element goes to `fn` with its index.
template <typename Fn>
void for_each_array_element(std::istream& in, const std::string& source,
                            std::vector<Violation>& violations, Fn&& fn) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    violations.push_back(
        {source, std::nullopt, std::string("malformed JSON: ") + e.what()});
    return;
  }
  if (!doc.is_array()) {
    violations.push_back({source, std::nullopt, "expected a JSON array"});
    return;
  }
  for (std::size_t i = 0; i < doc.size(); ++i) {
    try {
      fn(doc[i], i);
    } catch (const std::exception& e) {
      violations.push_back(
          {source, std::nullopt, "[" + std::to_string(i) + "]: " + e.what()});
    }
  }
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

template <typename T>
T throw_if_violations(Parsed<T> parsed) {
  if (!parsed.violations.empty()) {
    throw ValidationError(std::move(parsed.violations));
  }
  return std::move(parsed.value);
}

void append(std::vector<Violation>& to, std::vector<Violation> from) {
  to.insert(to.end(), std::make_move_iterator(from.begin()),
            std::make_move_iterator(from.end()));
}

}  // namespace

// ---------------------------------------------------------------- to_json

ordered_json to_json(const ItemRecord& item) {
  ordered_json j;
  j["item_id"] = item.item_id;
  j["domain"] = item.domain.to_string();
  j["title"] = item.title;
  ordered_json attrs = ordered_json::object();
  for (const auto& [name, values] : item.attributes) attrs[name] = values;
  j["attributes"] = std::move(attrs);
  if (item.popularity_rank) j["popularity_rank"] = *item.popularity_rank;
  return j;
}

ordered_json to_json(const Scenario& s) {
  ordered_json j;
  j["scenario_id"] = s.scenario_id;
  j["domain"] = s.domain.to_string();
  j["category"] = std::string(to_string(s.category));
  j["user_profile"] = s.user_profile;
  j["interaction_history"] = s.interaction_history;
  ordered_json tags = ordered_json::array();
  for (const auto& t : s.requirement_tags) {
    tags.push_back({{"attribute", t.attribute}, {"value", t.value}});
  }
  j["requirement_tags"] = std::move(tags);
  j["rubric"] = s.rubric;
  j["calibration_flag"] = s.calibration;
  return j;
}

ordered_json to_json(const Transcript& t) {
  ordered_json j;
  j["scenario_id"] = t.scenario_id;
  j["system_id"] = t.system_id;
  ordered_json turns = ordered_json::array();
  for (const auto& turn : t.turns) {
    ordered_json tj;
    tj["role"] = std::string(to_string(turn.role));
    tj["text"] = turn.text;
    if (turn.embedding_ref) tj["embedding_ref"] = *turn.embedding_ref;
    turns.push_back(std::move(tj));
  }
  j["turns"] = std::move(turns);
  ordered_json recs = ordered_json::array();
  for (const auto& r : t.recommendations) {
    ordered_json rj;
    rj["item_id"] = r.item_id;
    rj["rank"] = r.rank;
    if (r.explanation) rj["explanation"] = *r.explanation;
    if (r.explanation_embedding_ref) {
      rj["explanation_embedding_ref"] = *r.explanation_embedding_ref;
    }
    recs.push_back(std::move(rj));
  }
  j["recommendations"] = std::move(recs);
  return j;
}

ordered_json to_json(const RatingRecord& r) {
  ordered_json j;
  j["evaluator_id"] = r.evaluator_id;
  j["scenario_id"] = r.scenario_id;
  j["system_id"] = r.system_id;
  j["construct_id"] = std::string(to_string(r.construct));
  j["value"] = r.value;
  j["timestamp"] = r.timestamp_ms;
  j["session_id"] = r.session_id;
  return j;
}

ordered_json to_json(const RelevanceJudgment& rj) {
  ordered_json j;
  j["scenario_id"] = rj.scenario_id;
  j["relevant"] = rj.relevant;
  return j;
}

ordered_json to_json(const ParaphraseSet& s) {
  ordered_json j;
  j["query_id"] = s.query_id;
  j["original"] = s.original;
  j["paraphrases"] = s.paraphrases;
  if (s.system_id) j["system_id"] = *s.system_id;
  return j;
}

// ---------------------------------------------------------------- from_json

ItemRecord item_from_json(const json& j) {
  if (!j.is_object()) throw std::runtime_error("record is not a JSON object");
  require_only(j, {"item_id", "domain", "title", "attributes",
                   "popularity_rank"});
  ItemRecord item;
  item.item_id = nonempty_string_field(j, "item_id");
  item.domain = Domain::parse(nonempty_string_field(j, "domain"));
  item.title = string_field(j, "title");
  const json& attrs = field(j, "attributes");
  if (!attrs.is_object()) {
    throw std::runtime_error("field 'attributes' must be an object");
  }
  for (const auto& [name, values] : attrs.items()) {
    const std::string key = normalize_value(name);
    if (key.empty()) throw std::runtime_error("empty attribute name");
    if (!values.is_array() || values.empty()) {
      throw std::runtime_error("attribute '" + name +
                               "' must be a nonempty array of strings");
    }
    auto& slot = item.attributes[key];
    for (const auto& v : values) {
      if (!v.is_string()) {
        throw std::runtime_error("attribute '" + name +
                                 "' must contain only strings");
      }
      std::string norm = normalize_value(v.get<std::string>());
      if (norm.empty()) {
        throw std::runtime_error("attribute '" + name + "' has an empty value");
      }
      if (std::find(slot.begin(), slot.end(), norm) == slot.end()) {
        slot.push_back(std::move(norm));
      }
    }
  }
  if (auto it = j.find("popularity_rank"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 1) {
      throw std::runtime_error("popularity_rank must be a positive integer");
    }
    item.popularity_rank = it->get<int>();
  }
  return item;
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  s.scenario_id = nonempty_string_field(j, "scenario_id");
  s.domain = Domain::parse(nonempty_string_field(j, "domain"));
  const std::string cat = string_field(j, "category");
  auto category = parse_category(cat);
  if (!category) {
    throw std::runtime_error("scenario '" + s.scenario_id +
                             "': unknown category '" + cat + "'");
  }
  s.category = *category;
  s.user_profile = j.contains("user_profile") ? string_field(j, "user_profile")
                                              : std::string{};
  if (j.contains("interaction_history")) {
    s.interaction_history = string_array(j, "interaction_history");
  }
  if (j.contains("requirement_tags")) {
    const json& tags = j["requirement_tags"];
    if (!tags.is_array()) {
      throw std::runtime_error("field 'requirement_tags' must be an array");
    }
    for (const auto& t : tags) {
      RequirementTag tag;
      if (t.is_array() && t.size() == 2 && t[0].is_string() &&
          t[1].is_string()) {
        tag.attribute = t[0].get<std::string>();
        tag.value = t[1].get<std::string>();
      } else {
        tag.attribute = string_field(t, "attribute");
        tag.value = string_field(t, "value");
      }
      tag.attribute = normalize_value(tag.attribute);
      tag.value = normalize_value(tag.value);
      if (tag.attribute.empty() || tag.value.empty()) {
        throw std::runtime_error("scenario '" + s.scenario_id +
                                 "': requirement tag with empty part");
      }
      s.requirement_tags.push_back(std::move(tag));
    }
  }
  s.rubric = j.contains("rubric") ? string_field(j, "rubric") : std::string{};
  if (auto it = j.find("calibration_flag"); it != j.end()) {
    if (!it->is_boolean()) {
      throw std::runtime_error("field 'calibration_flag' must be a boolean");
    }
    s.calibration = it->get<bool>();
  }
  return s;
}

Transcript transcript_from_json(const json& j) {
  Transcript t;
  t.scenario_id = nonempty_string_field(j, "scenario_id");
  t.system_id = nonempty_string_field(j, "system_id");
  const json& turns = field(j, "turns");
  if (!turns.is_array()) throw std::runtime_error("field 'turns' must be an array");
  for (const auto& tj : turns) {
    Turn turn;
    const std::string role = string_field(tj, "role");
    if (role == "user") {
      turn.role = Role::kUser;
    } else if (role == "system") {
      turn.role = Role::kSystem;
    } else {
      throw std::runtime_error("unknown turn role '" + role + "'");
    }
    turn.text = nonempty_string_field(tj, "text");
    turn.embedding_ref = optional_string(tj, "embedding_ref");
    t.turns.push_back(std::move(turn));
  }
  const json& recs = field(j, "recommendations");
  if (!recs.is_array()) {
    throw std::runtime_error("field 'recommendations' must be an array");
  }
  for (const auto& rj : recs) {
    RecommendationEntry e;
    e.item_id = nonempty_string_field(rj, "item_id");
    const auto rank = integer_field(rj, "rank");
    if (rank < 1) throw std::runtime_error("rank must be a positive integer");
    e.rank = static_cast<int>(rank);
    e.explanation = optional_string(rj, "explanation");
    e.explanation_embedding_ref = optional_string(rj, "explanation_embedding_ref");
    t.recommendations.push_back(std::move(e));
  }
  std::stable_sort(t.recommendations.begin(), t.recommendations.end(),
                   [](const auto& a, const auto& b) { return a.rank < b.rank; });
  return t;
}

RatingRecord rating_from_json(const json& j) {
  RatingRecord r;
  r.evaluator_id = nonempty_string_field(j, "evaluator_id");
  r.scenario_id = nonempty_string_field(j, "scenario_id");
  r.system_id = nonempty_string_field(j, "system_id");
  const std::string code = string_field(j, "construct_id");
  auto construct = parse_construct(code);
  if (!construct) throw std::runtime_error("unknown construct_id '" + code + "'");
  r.construct = *construct;
  const auto value = integer_field(j, "value");
  if (value < kLikertMin || value > kLikertMax) {
    throw std::runtime_error("value " + std::to_string(value) +
                             " outside Likert bounds [1,5]");
  }
  r.value = static_cast<int>(value);
  r.timestamp_ms = j.contains("timestamp") ? integer_field(j, "timestamp") : 0;
  r.session_id = j.contains("session_id") ? string_field(j, "session_id")
                                          : std::string{};
  return r;
}

RelevanceJudgment judgment_from_json(const json& j) {
  RelevanceJudgment rj;
  rj.scenario_id = nonempty_string_field(j, "scenario_id");
  rj.relevant = string_array(j, "relevant");
  return rj;
}

ParaphraseSet paraphrase_set_from_json(const json& j) {
  ParaphraseSet s;
  s.query_id = nonempty_string_field(j, "query_id");
  s.original = nonempty_string_field(j, "original");
  s.paraphrases = string_array(j, "paraphrases");
  if (s.paraphrases.empty()) {
    throw std::runtime_error("query '" + s.query_id +
                             "' needs at least one paraphrase");
  }
  s.system_id = optional_string(j, "system_id");
  return s;
}

// ---------------------------------------------------------------- parsers

Parsed<Catalog> parse_catalog(std::istream& in, const std::string& source) {
  Parsed<Catalog> out;
  std::map<std::string, std::size_t> first_line;
  for_each_jsonl(in, source, out.violations,
                 [&](const json& j, std::size_t line) {
                   ItemRecord item = item_from_json(j);
                   auto [it, fresh] = first_line.emplace(item.item_id, line);
                   if (!fresh) {
                     throw std::runtime_error(
                         "duplicate item_id '" + item.item_id +
                         "' (first defined on line " +
                         std::to_string(it->second) + ")");
                   }
                   std::string id = item.item_id;
                   out.value.emplace(std::move(id), std::move(item));
                 });
  return out;
}

Parsed<std::vector<Scenario>> parse_scenarios(std::istream& in,
                                              const std::string& source) {
  Parsed<std::vector<Scenario>> out;
  std::set<std::string> seen;
  for_each_array_element(in, source, out.violations,
                         [&](const json& j, std::size_t) {
                           Scenario s = scenario_from_json(j);
                           if (!seen.insert(s.scenario_id).second) {
                             throw std::runtime_error("duplicate scenario_id '" +
                                                      s.scenario_id + "'");
                           }
                           out.value.push_back(std::move(s));
                         });
  return out;
}

Parsed<std::vector<Transcript>> parse_transcripts(std::istream& in,
                                                  const std::string& source) {
  Parsed<std::vector<Transcript>> out;
  std::set<std::pair<std::string, std::string>> seen;
  for_each_array_element(
      in, source, out.violations, [&](const json& j, std::size_t) {
        Transcript t = transcript_from_json(j);
        const std::string label =
            "transcript (" + t.scenario_id + ", " + t.system_id + ")";
        if (!seen.emplace(t.scenario_id, t.system_id).second) {
          throw std::runtime_error("duplicate " + label);
        }
        for (std::size_t i = 0; i < t.turns.size(); ++i) {
          const Role expected = (i % 2 == 0) ? Role::kUser : Role::kSystem;
          if (t.turns[i].role != expected) {
            throw std::runtime_error(label + ": turn " + std::to_string(i) +
                                     " should be " +
                                     std::string(to_string(expected)) +
                                     " (roles alternate starting with user)");
          }
        }
        for (std::size_t i = 0; i < t.recommendations.size(); ++i) {
          if (t.recommendations[i].rank != static_cast<int>(i) + 1) {
            throw std::runtime_error(label +
                                     ": recommendation ranks must be 1..n "
                                     "without gaps or repeats");
          }
        }
        out.value.push_back(std::move(t));
      });
  return out;
}

Parsed<std::vector<RatingRecord>> parse_ratings(std::istream& in,
                                                const std::string& source) {
  Parsed<std::vector<RatingRecord>> out;
  std::map<RatingKey, std::size_t> first_line;
  for_each_jsonl(in, source, out.violations,
                 [&](const json& j, std::size_t line) {
                   RatingRecord r = rating_from_json(j);
                   auto [it, fresh] = first_line.emplace(key_of(r), line);
                   if (!fresh) {
                     throw std::runtime_error(
                         "duplicate rating for (" + r.evaluator_id + ", " +
                         r.scenario_id + ", " + r.system_id + ", " +
                         std::string(to_string(r.construct)) +
                         ") (first on line " + std::to_string(it->second) +
                         ")");
                   }
                   out.value.push_back(std::move(r));
                 });
  return out;
}

Parsed<EmbeddingTable> parse_embeddings(std::istream& in,
                                        const std::string& source) {
  Parsed<EmbeddingTable> out;
  for_each_jsonl(in, source, out.violations, [&](const json& j, std::size_t) {
    std::string key = nonempty_string_field(j, "key");
    const json& v = field(j, "vector");
    if (!v.is_array()) throw std::runtime_error("field 'vector' must be an array");
    std::vector<double> vec;
    vec.reserve(v.size());
    for (const auto& x : v) {
      if (!x.is_number()) {
        throw std::runtime_error("embedding '" + key +
                                 "' has a non-numeric component");
      }
      vec.push_back(x.get<double>());
    }
    out.value.insert(std::move(key), std::move(vec));
  });
  return out;
}

Parsed<std::vector<RelevanceJudgment>> parse_judgments(
    std::istream& in, const std::string& source) {
  Parsed<std::vector<RelevanceJudgment>> out;
  std::set<std::string> seen;
  for_each_jsonl(in, source, out.violations, [&](const json& j, std::size_t) {
    RelevanceJudgment rj = judgment_from_json(j);
    if (!seen.insert(rj.scenario_id).second) {
      throw std::runtime_error("duplicate judgment for scenario '" +
                               rj.scenario_id + "'");
    }
    out.value.push_back(std::move(rj));
  });
  return out;
}

Parsed<std::vector<ParaphraseSet>> parse_paraphrase_sets(
    std::istream& in, const std::string& source) {
  Parsed<std::vector<ParaphraseSet>> out;
  std::set<std::pair<std::string, std::string>> seen;
  for_each_jsonl(in, source, out.violations, [&](const json& j, std::size_t) {
    ParaphraseSet s = paraphrase_set_from_json(j);
    if (!seen.emplace(s.system_id.value_or(""), s.query_id).second) {
      throw std::runtime_error("duplicate paraphrase set '" + s.query_id + "'");
    }
    out.value.push_back(std::move(s));
  });
  return out;
}

// ---------------------------------------------------------------- writers

void write_catalog(std::ostream& out, const Catalog& catalog) {
  for (const auto& [_, item] : catalog) out << to_json(item).dump() << '\n';
}

void write_scenarios(std::ostream& out, const std::vector<Scenario>& scenarios) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : scenarios) arr.push_back(to_json(s));
  out << arr.dump(2) << '\n';
}

void write_transcripts(std::ostream& out,
                       const std::vector<Transcript>& transcripts) {
  ordered_json arr = ordered_json::array();
  for (const auto& t : transcripts) arr.push_back(to_json(t));
  out << arr.dump(2) << '\n';
}

void write_ratings(std::ostream& out, const std::vector<RatingRecord>& ratings) {
  for (const auto& r : ratings) out << to_json(r).dump() << '\n';
}

void write_embeddings(std::ostream& out, const EmbeddingTable& table) {
  for (const auto& [key, vec] : table.entries()) {
    ordered_json j;
    j["key"] = key;
    j["vector"] = vec;
    out << j.dump() << '\n';
  }
}

void write_judgments(std::ostream& out,
                     const std::vector<RelevanceJudgment>& judgments) {
  for (const auto& j : judgments) out << to_json(j).dump() << '\n';
}

void write_paraphrase_sets(std::ostream& out,
                           const std::vector<ParaphraseSet>& sets) {
  for (const auto& s : sets) out << to_json(s).dump() << '\n';
}

// ---------------------------------------------------------------- validation

DomainSchema schema_of(const Catalog& catalog) {
  DomainSchema schema;
  for (const auto& [_, item] : catalog) {
    auto& names = schema[item.domain];
    for (const auto& [name, __] : item.attributes) names.insert(name);
  }
  return schema;
}

std::vector<Violation> validate_scenarios(const std::vector<Scenario>& scenarios,
                                          const Catalog& catalog,
                                          const std::string& source) {
  std::vector<Violation> out;
  const DomainSchema schema = schema_of(catalog);
  for (const auto& s : scenarios) {
    for (const auto& item_id : s.interaction_history) {
      if (!catalog.contains(item_id)) {
        out.push_back({source, std::nullopt,
                       "scenario '" + s.scenario_id +
                           "': interaction_history references unknown item '" +
                           item_id + "'"});
      }
    }
    auto names = schema.find(s.domain);
    for (const auto& tag : s.requirement_tags) {
      if (names == schema.end() || !names->second.contains(tag.attribute)) {
        out.push_back({source, std::nullopt,
                       "scenario '" + s.scenario_id + "': requirement tag '" +
                           tag.attribute + "' is not an attribute of domain '" +
                           s.domain.to_string() + "'"});
      }
    }
  }
  return out;
}

std::vector<Violation> validate_transcripts(
    const std::vector<Transcript>& transcripts, const Catalog& catalog,
    const std::vector<Scenario>& scenarios, const EmbeddingTable* embeddings,
    const std::string& source) {
  std::vector<Violation> out;
  std::set<std::string> scenario_ids;
  for (const auto& s : scenarios) scenario_ids.insert(s.scenario_id);
  for (const auto& t : transcripts) {
    const std::string label =
        "transcript (" + t.scenario_id + ", " + t.system_id + ")";
    if (!scenario_ids.contains(t.scenario_id)) {
      out.push_back({source, std::nullopt,
                     label + ": unknown scenario_id '" + t.scenario_id + "'"});
    }
    for (const auto& r : t.recommendations) {
      if (!catalog.contains(r.item_id)) {
        out.push_back({source, std::nullopt,
                       label + ": unknown item_id '" + r.item_id + "'"});
      }
      if (embeddings && r.explanation_embedding_ref &&
          !embeddings->contains(*r.explanation_embedding_ref)) {
        out.push_back({source, std::nullopt,
                       label + ": unknown embedding key '" +
                           *r.explanation_embedding_ref + "'"});
      }
    }
    if (embeddings) {
      for (const auto& turn : t.turns) {
        if (turn.embedding_ref && !embeddings->contains(*turn.embedding_ref)) {
          out.push_back({source, std::nullopt,
                         label + ": unknown embedding key '" +
                             *turn.embedding_ref + "'"});
        }
      }
    }
  }
  return out;
}

std::vector<Violation> validate_ratings(
    const std::vector<RatingRecord>& ratings,
    const std::vector<Scenario>& scenarios,
    const std::vector<Transcript>* transcripts, const std::string& source) {
  std::vector<Violation> out;
  std::set<std::string> scenario_ids;
  for (const auto& s : scenarios) scenario_ids.insert(s.scenario_id);
  std::set<std::pair<std::string, std::string>> pairs;
  if (transcripts) {
    for (const auto& t : *transcripts) pairs.emplace(t.scenario_id, t.system_id);
  }
  for (const auto& r : ratings) {
    if (!scenario_ids.contains(r.scenario_id)) {
      out.push_back({source, std::nullopt,
                     "rating by '" + r.evaluator_id +
                         "' references unknown scenario_id '" + r.scenario_id +
                         "'"});
    } else if (transcripts && !pairs.contains({r.scenario_id, r.system_id})) {
      out.push_back({source, std::nullopt,
                     "rating by '" + r.evaluator_id + "' references (" +
                         r.scenario_id + ", " + r.system_id +
                         ") which has no transcript"});
    }
  }
  return out;
}

std::vector<Violation> validate_judgments(
    const std::vector<RelevanceJudgment>& judgments, const Catalog& catalog,
    const std::vector<Scenario>& scenarios, const std::string& source) {
  std::vector<Violation> out;
  std::set<std::string> scenario_ids;
  for (const auto& s : scenarios) scenario_ids.insert(s.scenario_id);
  for (const auto& j : judgments) {
    if (!scenario_ids.contains(j.scenario_id)) {
      out.push_back({source, std::nullopt,
                     "judgment references unknown scenario_id '" +
                         j.scenario_id + "'"});
    }
    if (j.relevant.empty()) {
      out.push_back({source, std::nullopt,
                     "judgment for '" + j.scenario_id + "' has no relevant items"});
    }
    for (const auto& item : j.relevant) {
      if (!catalog.contains(item)) {
        out.push_back({source, std::nullopt,
                       "judgment for '" + j.scenario_id +
                           "' references unknown item '" + item + "'"});
      }
    }
  }
  return out;
}

std::vector<Violation> validate_paraphrase_sets(
    const std::vector<ParaphraseSet>& sets, const EmbeddingTable& embeddings,
    const std::string& source) {
  std::vector<Violation> out;
  for (const auto& s : sets) {
    auto check = [&](const std::string& key) {
      if (!embeddings.contains(key)) {
        out.push_back({source, std::nullopt,
                       "paraphrase set '" + s.query_id +
                           "' references unknown embedding key '" + key + "'"});
      }
    };
    check(s.original);
    for (const auto& p : s.paraphrases) check(p);
  }
  return out;
}

// ---------------------------------------------------------------- loaders

Catalog load_catalog(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return throw_if_violations(parse_catalog(in, path.string()));
}

std::vector<Scenario> load_scenarios(const std::filesystem::path& path,
                                     const Catalog& catalog) {
  auto in = open_or_throw(path);
  auto parsed = parse_scenarios(in, path.string());
  append(parsed.violations,
         validate_scenarios(parsed.value, catalog, path.string()));
  return throw_if_violations(std::move(parsed));
}

std::vector<Transcript> load_transcripts(const std::filesystem::path& path,
                                         const Catalog& catalog,
                                         const std::vector<Scenario>& scenarios,
                                         const EmbeddingTable* embeddings) {
  auto in = open_or_throw(path);
  auto parsed = parse_transcripts(in, path.string());
  append(parsed.violations, validate_transcripts(parsed.value, catalog,
                                                 scenarios, embeddings,
                                                 path.string()));
  return throw_if_violations(std::move(parsed));
}

std::vector<RatingRecord> load_ratings(
    const std::filesystem::path& path, const std::vector<Scenario>& scenarios,
    const std::vector<Transcript>* transcripts) {
  auto in = open_or_throw(path);
  auto parsed = parse_ratings(in, path.string());
  append(parsed.violations, validate_ratings(parsed.value, scenarios,
                                             transcripts, path.string()));
  return throw_if_violations(std::move(parsed));
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return throw_if_violations(parse_embeddings(in, path.string()));
}

std::vector<RelevanceJudgment> load_judgments(
    const std::filesystem::path& path, const Catalog& catalog,
    const std::vector<Scenario>& scenarios) {
  auto in = open_or_throw(path);
  auto parsed = parse_judgments(in, path.string());
  append(parsed.violations,
         validate_judgments(parsed.value, catalog, scenarios, path.string()));
  return throw_if_violations(std::move(parsed));
}

std::vector<ParaphraseSet> load_paraphrase_sets(
    const std::filesystem::path& path, const EmbeddingTable& embeddings) {
  auto in = open_or_throw(path);
  auto parsed = parse_paraphrase_sets(in, path.string());
  append(parsed.violations,
         validate_paraphrase_sets(parsed.value, embeddings, path.string()));
  return throw_if_violations(std::move(parsed));
}

// ---------------------------------------------------------------- bundle

const Scenario* Bundle::find_scenario(const std::string& id) const {
  for (const auto& s : scenarios) {
    if (s.scenario_id == id) return &s;
  }
  return nullptr;
}

const Transcript* Bundle::find_transcript(const std::string& scenario_id,
                                          const std::string& system_id) const {
  for (const auto& t : transcripts) {
    if (t.scenario_id == scenario_id && t.system_id == system_id) return &t;
  }
  return nullptr;
}

std::vector<std::string> Bundle::system_ids() const {
  std::set<std::string> ids;
  for (const auto& t : transcripts) ids.insert(t.system_id);
  for (const auto& r : ratings) ids.insert(r.system_id);
  return {ids.begin(), ids.end()};
}

Parsed<Bundle> load_bundle(const BundlePaths& paths) {
  Parsed<Bundle> out;
  Bundle& b = out.value;
  auto& v = out.violations;

  // Opens and parses one file; I/O failures become violations.
  auto read = [&](const std::optional<std::filesystem::path>& path,
                  auto&& parse) -> bool {
    if (!path) return false;
    std::ifstream in(*path);
    if (!in) {
      v.push_back({path->string(), std::nullopt, "cannot open file"});
      return false;
    }
    parse(in, path->string());
    return true;
  };

  read(paths.embeddings, [&](std::istream& in, const std::string& src) {
    auto p = parse_embeddings(in, src);
    b.embeddings = std::move(p.value);
    append(v, std::move(p.violations));
  });
  read(paths.catalog, [&](std::istream& in, const std::string& src) {
    auto p = parse_catalog(in, src);
    b.catalog = std::move(p.value);
    append(v, std::move(p.violations));
  });
  read(paths.scenarios, [&](std::istream& in, const std::string& src) {
    auto p = parse_scenarios(in, src);
    b.scenarios = std::move(p.value);
    append(v, std::move(p.violations));
    append(v, validate_scenarios(b.scenarios, b.catalog, src));
  });
  read(paths.transcripts, [&](std::istream& in, const std::string& src) {
    auto p = parse_transcripts(in, src);
    b.transcripts = std::move(p.value);
    append(v, std::move(p.violations));
    append(v, validate_transcripts(b.transcripts, b.catalog, b.scenarios,
                                   paths.embeddings ? &b.embeddings : nullptr,
                                   src));
  });
  read(paths.ratings, [&](std::istream& in, const std::string& src) {
    auto p = parse_ratings(in, src);
    b.ratings = std::move(p.value);
    append(v, std::move(p.violations));
    append(v, validate_ratings(b.ratings, b.scenarios,
                               paths.transcripts ? &b.transcripts : nullptr,
                               src));
  });
  b.has_judgments =
      read(paths.judgments, [&](std::istream& in, const std::string& src) {
        auto p = parse_judgments(in, src);
        b.judgments = std::move(p.value);
        append(v, std::move(p.violations));
        append(v, validate_judgments(b.judgments, b.catalog, b.scenarios, src));
      });
  read(paths.paraphrases, [&](std::istream& in, const std::string& src) {
    auto p = parse_paraphrase_sets(in, src);
    b.paraphrase_sets = std::move(p.value);
    append(v, std::move(p.violations));
    append(v, validate_paraphrase_sets(b.paraphrase_sets, b.embeddings, src));
  });
  if (paths.applicability) {
    try {
      b.applicability = load_applicability(*paths.applicability);
    } catch (const ValidationError& e) {
      append(v, e.violations());
    } catch (const IoError& e) {
      v.push_back({paths.applicability->string(), std::nullopt, e.what()});
    }
  }
  return out;
}

}  // namespace helm
