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

#include "helm/faithfulness/faithfulness.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "helm/core/errors.hpp"
#include "helm/core/io.hpp"
#include "helm/core/text.hpp"

namespace helm::faithfulness {

namespace {

constexpr std::string_view kSlot = "{value}";

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_word(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 ||
         static_cast<unsigned char>(c) >= 0x80;
}
bool is_delimiter(char c) {
  switch (c) {
    case ',': case ';': case '.': case '!': case '?':
    case '(': case ')': case '\n':
      return true;
    default:
      return false;
  }
}

// Matches `literal` against `text` at `pos`. Whitespace runs in the literal
// match one or more whitespace characters in the text. Returns the end offset.
std::optional<std::size_t> match_literal(std::string_view text, std::size_t pos,
                                         std::string_view literal) {
  std::size_t i = pos;
  std::size_t j = 0;
  while (j < literal.size()) {
    if (is_space(literal[j])) {
      while (j < literal.size() && is_space(literal[j])) ++j;
      if (i >= text.size() || !is_space(text[i])) return std::nullopt;
      while (i < text.size() && is_space(text[i])) ++i;
      continue;
    }
    if (i >= text.size() || text[i] != literal[j]) return std::nullopt;
    ++i;
    ++j;
  }
  return i;
}

// Word boundary on the alphanumeric side of a literal edge.
bool starts_on_boundary(std::string_view text, std::size_t pos,
                        std::string_view literal) {
  if (literal.empty() || !is_word(literal.front())) return true;
  return pos == 0 || !is_word(text[pos - 1]);
}

bool ends_on_boundary(std::string_view text, std::size_t end,
                      std::string_view literal) {
  if (literal.empty() || !is_word(literal.back())) return true;
  return end >= text.size() || !is_word(text[end]);
}

Span trimmed(std::string_view text, std::size_t begin, std::size_t end) {
  while (begin < end && is_space(text[begin])) ++begin;
  while (end > begin && is_space(text[end - 1])) --end;
  return {begin, end};
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kCorrect:
      return "verifiable_correct";
    case Verdict::kIncorrect:
      return "verifiable_incorrect";
    case Verdict::kUnverifiable:
      break;
  }
  return "unverifiable";
}

std::string_view to_string(ScoreMode m) {
  return m == ScoreMode::kVerifiableOnly ? "verifiable_only" : "all_claims";
}

std::optional<ScoreMode> parse_score_mode(std::string_view text) {
  if (text == "verifiable_only") return ScoreMode::kVerifiableOnly;
  if (text == "all_claims") return ScoreMode::kAllClaims;
  return std::nullopt;
}

void validate_rule(const ExtractionRule& rule) {
  if (normalize_value(rule.attribute).empty()) {
    throw std::invalid_argument("extraction rule has an empty attribute");
  }
  if (rule.patterns.empty()) {
    throw std::invalid_argument("rule '" + rule.attribute + "' has no patterns");
  }
  for (const auto& p : rule.patterns) {
    const auto first = p.find(kSlot);
    if (first == std::string::npos ||
        p.find(kSlot, first + kSlot.size()) != std::string::npos) {
      throw std::invalid_argument("pattern '" + p + "' of rule '" +
                                  rule.attribute +
                                  "' needs exactly one {value} slot");
    }
    if (normalize_value(p.substr(0, first)).empty()) {
      throw std::invalid_argument("pattern '" + p + "' of rule '" +
                                  rule.attribute +
                                  "' needs literal text before {value}");
    }
  }
}

std::vector<ExtractionRule> parse_rules(std::istream& in,
                                        const std::string& source,
                                        const Catalog* catalog) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError({{source, std::nullopt,
                            std::string("malformed JSON: ") + e.what()}});
  }
  if (doc.is_object() && doc.contains("rules")) doc = doc["rules"];
  if (!doc.is_array()) {
    throw ValidationError({{source, std::nullopt, "expected an array of rules"}});
  }

  std::set<std::string> known;
  if (catalog) {
    for (const auto& [_, names] : schema_of(*catalog)) {
      known.insert(names.begin(), names.end());
    }
  }

  std::vector<ExtractionRule> rules;
  std::vector<Violation> violations;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& j = doc[i];
    try {
      ExtractionRule rule;
      if (!j.is_object() || !j.contains("attribute") || !j["attribute"].is_string()) {
        throw std::invalid_argument("rule needs a string 'attribute'");
      }
      rule.attribute = normalize_value(j["attribute"].get<std::string>());
      if (!j.contains("patterns") || !j["patterns"].is_array()) {
        throw std::invalid_argument("rule '" + rule.attribute +
                                    "' needs a 'patterns' array");
      }
      for (const auto& p : j["patterns"]) {
        if (!p.is_string()) throw std::invalid_argument("patterns must be strings");
        rule.patterns.push_back(p.get<std::string>());
      }
      validate_rule(rule);
      if (catalog && !known.contains(rule.attribute)) {
        throw std::invalid_argument("rule attribute '" + rule.attribute +
                                    "' is not in the catalog schema");
      }
      rules.push_back(std::move(rule));
    } catch (const std::exception& e) {
      violations.push_back(
          {source, std::nullopt, "rules[" + std::to_string(i) + "]: " + e.what()});
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return rules;
}

std::vector<ExtractionRule> load_rules(const std::filesystem::path& path,
                                       const Catalog* catalog) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open rules file " + path.string());
  return parse_rules(in, path.string(), catalog);
}

RuleBasedExtractor::RuleBasedExtractor(std::vector<ExtractionRule> rules) {
  std::size_t order = 0;
  for (const auto& rule : rules) {
    validate_rule(rule);
    for (const auto& p : rule.patterns) {
      const auto slot = p.find(kSlot);
      Compiled c;
      c.attribute = normalize_value(rule.attribute);
      c.prefix = ascii_lower(p.substr(0, slot));
      c.suffix = ascii_lower(p.substr(slot + kSlot.size()));
      // Leading whitespace of the prefix carries no information.
      c.prefix.erase(0, c.prefix.find_first_not_of(" \t\n"));
      c.order = order++;
      compiled_.push_back(std::move(c));
    }
  }
}

std::vector<Claim> RuleBasedExtractor::extract(const std::string& explanation,
                                               const ClaimSource& source) const {
  const std::string lower = ascii_lower(explanation);
  const std::string_view text(lower);

  struct Candidate {
    Claim claim;
    std::size_t order;
  };
  std::vector<Candidate> candidates;

  for (const auto& rule : compiled_) {
    for (std::size_t pos = 0; pos < text.size(); ++pos) {
      if (!starts_on_boundary(text, pos, rule.prefix)) continue;
      auto prefix_end = match_literal(text, pos, rule.prefix);
      if (!prefix_end) continue;
      if (!is_space(rule.prefix.back()) &&
          !ends_on_boundary(text, *prefix_end, rule.prefix)) {
        continue;
      }
      const std::size_t vstart = *prefix_end;
      std::size_t limit = vstart;
      while (limit < text.size() && !is_delimiter(text[limit])) ++limit;

      std::size_t vend = limit;
      std::size_t match_end = limit;
      if (!rule.suffix.empty()) {
        bool found = false;
        for (std::size_t p = vstart + 1; p <= limit && p < text.size(); ++p) {
          auto suffix_end = match_literal(text, p, rule.suffix);
          if (suffix_end && ends_on_boundary(text, *suffix_end, rule.suffix) &&
              (is_space(rule.suffix.front()) || !is_word(rule.suffix.front()) ||
               !is_word(text[p - 1]))) {
            vend = p;
            match_end = *suffix_end;
            found = true;
            break;
          }
        }
        if (!found) continue;
      }
      const Span value_span = trimmed(text, vstart, vend);
      std::string value = normalize_value(
          std::string_view(explanation).substr(value_span.begin, value_span.length()));
      if (value.empty()) continue;
      if (rule.suffix.empty()) match_end = value_span.end;

      Claim claim;
      claim.source = source;
      claim.attribute = rule.attribute;
      claim.value = std::move(value);
      claim.span = {pos, match_end};
      claim.value_span = value_span;
      candidates.push_back({std::move(claim), rule.order});
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.claim.span.length() != b.claim.span.length()) {
                return a.claim.span.length() > b.claim.span.length();
              }
              if (a.claim.span.begin != b.claim.span.begin) {
                return a.claim.span.begin < b.claim.span.begin;
              }
              return a.order < b.order;
            });
  std::vector<Claim> accepted;
  for (auto& c : candidates) {
    const bool overlaps = std::any_of(
        accepted.begin(), accepted.end(), [&](const Claim& other) {
          return c.claim.span.begin < other.span.end &&
                 other.span.begin < c.claim.span.end;
        });
    if (!overlaps) accepted.push_back(std::move(c.claim));
  }
  std::sort(accepted.begin(), accepted.end(), [](const Claim& a, const Claim& b) {
    return a.span.begin < b.span.begin;
  });
  return accepted;
}

std::vector<Claim> extract_claims(const std::string& explanation,
                                  const std::string& item_id,
                                  std::span<const ExtractionRule> rules) {
  RuleBasedExtractor extractor({rules.begin(), rules.end()});
  return extractor.extract(explanation, {{}, {}, item_id});
}

ClaimVerdict verify(const Claim& claim, const Catalog& catalog) {
  auto it = catalog.find(claim.source.item_id);
  if (it == catalog.end()) {
    throw std::out_of_range("verify: unknown item '" + claim.source.item_id + "'");
  }
  const auto& attrs = it->second.attributes;
  auto a = attrs.find(normalize_value(claim.attribute));
  ClaimVerdict out{claim, Verdict::kUnverifiable};
  if (a != attrs.end()) {
    const std::string value = normalize_value(claim.value);
    out.verdict = std::find(a->second.begin(), a->second.end(), value) != a->second.end()
                      ? Verdict::kCorrect
                      : Verdict::kIncorrect;
  }
  return out;
}

VerdictCounts count_verdicts(std::span<const ClaimVerdict> verdicts) {
  VerdictCounts c;
  for (const auto& v : verdicts) {
    switch (v.verdict) {
      case Verdict::kCorrect:
        ++c.correct;
        break;
      case Verdict::kIncorrect:
        ++c.incorrect;
        break;
      case Verdict::kUnverifiable:
        ++c.unverifiable;
        break;
    }
  }
  return c;
}

FaithfulnessScore faithfulness_score(std::span<const ClaimVerdict> verdicts,
                                     ScoreMode mode) {
  FaithfulnessScore out;
  out.counts = count_verdicts(verdicts);
  const std::size_t denom = mode == ScoreMode::kVerifiableOnly
                                ? out.counts.correct + out.counts.incorrect
                                : out.counts.total();
  if (denom > 0) {
    out.score = static_cast<double>(out.counts.correct) / static_cast<double>(denom);
  }
  return out;
}

std::optional<double> hallucination_rate(
    std::span<const std::vector<ClaimVerdict>> per_explanation) {
  std::size_t qualifying = 0;
  std::size_t flawed = 0;
  for (const auto& verdicts : per_explanation) {
    const VerdictCounts c = count_verdicts(verdicts);
    if (c.correct + c.incorrect == 0) continue;
    ++qualifying;
    if (c.incorrect > 0) ++flawed;
  }
  if (qualifying == 0) return std::nullopt;
  return static_cast<double>(flawed) / static_cast<double>(qualifying);
}

void write_verdicts(std::ostream& out, std::span<const ClaimVerdict> verdicts) {
  for (const auto& v : verdicts) {
    nlohmann::ordered_json j;
    j["scenario_id"] = v.claim.source.scenario_id;
    j["system_id"] = v.claim.source.system_id;
    j["item_id"] = v.claim.source.item_id;
    j["attribute"] = v.claim.attribute;
    j["value"] = v.claim.value;
    j["span"] = {v.claim.span.begin, v.claim.span.end};
    j["verdict"] = std::string(to_string(v.verdict));
    out << j.dump() << '\n';
  }
}

}  // namespace helm::faithfulness
