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

// Explanation faithfulness: attribute claims are pulled out of explanation
// text, checked against catalog metadata, and scored.
//
// Rules are templates with one `{value}` slot, e.g. "directed by {value}".
// Template literals match case-insensitively on word boundaries. A value slot
// followed by literal text captures up to the nearest occurrence of that text;
// a trailing slot captures up to the next clause delimiter (, ; . ! ? ( ) or a
// newline) or the end of the explanation.

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "helm/core/types.hpp"

namespace helm::faithfulness {

struct ClaimSource {
  std::string scenario_id;
  std::string system_id;
  std::string item_id;

  friend bool operator==(const ClaimSource&, const ClaimSource&) = default;
};

// Half-open character range [begin, end) into the explanation.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  friend bool operator==(const Span&, const Span&) = default;
};

struct Claim {
  ClaimSource source;
  std::string attribute;
  std::string value;  // normalized
  Span span;          // whole template match
  Span value_span;    // the captured value only

  friend bool operator==(const Claim&, const Claim&) = default;
};

enum class Verdict { kCorrect, kIncorrect, kUnverifiable };

std::string_view to_string(Verdict v);

struct ClaimVerdict {
  Claim claim;
  Verdict verdict = Verdict::kUnverifiable;
};

struct ExtractionRule {
  std::string attribute;
  std::vector<std::string> patterns;
};

// Throws std::invalid_argument on an empty attribute, no patterns, or a
// pattern without exactly one {value} slot.
void validate_rule(const ExtractionRule& rule);

// JSON: [{"attribute": "director", "patterns": ["directed by {value}"]}, ...]
// or {"rules": [...]}. When `catalog` is given every attribute must exist in
// its schema. Throws ValidationError listing all problems.
std::vector<ExtractionRule> load_rules(const std::filesystem::path& path,
                                       const Catalog* catalog = nullptr);
std::vector<ExtractionRule> parse_rules(std::istream& in,
                                        const std::string& source,
                                        const Catalog* catalog = nullptr);

class ClaimExtractor {
 public:
  virtual ~ClaimExtractor() = default;
  virtual std::vector<Claim> extract(const std::string& explanation,
                                     const ClaimSource& source) const = 0;
};

class RuleBasedExtractor final : public ClaimExtractor {
 public:
  explicit RuleBasedExtractor(std::vector<ExtractionRule> rules);

  // Claims ordered by span start; overlapping matches resolved
  // longest-match-first (ties go to the earlier rule, then pattern).
  std::vector<Claim> extract(const std::string& explanation,
                             const ClaimSource& source) const override;

 private:
  struct Compiled {
    std::string attribute;
    std::string prefix;  // lowercase
    std::string suffix;  // lowercase, may be empty
    std::size_t order;
  };
  std::vector<Compiled> compiled_;
};

// Convenience wrapper over RuleBasedExtractor.
std::vector<Claim> extract_claims(const std::string& explanation,
                                  const std::string& item_id,
                                  std::span<const ExtractionRule> rules);

// correct iff the claimed value is among the item's values for the attribute;
// incorrect iff the attribute exists but the value does not; unverifiable iff
// the item lacks the attribute. Throws std::out_of_range on unknown item.
ClaimVerdict verify(const Claim& claim, const Catalog& catalog);

enum class ScoreMode { kVerifiableOnly, kAllClaims };

std::string_view to_string(ScoreMode m);
std::optional<ScoreMode> parse_score_mode(std::string_view text);

struct VerdictCounts {
  std::size_t correct = 0;
  std::size_t incorrect = 0;
  std::size_t unverifiable = 0;

  std::size_t total() const { return correct + incorrect + unverifiable; }
};

struct FaithfulnessScore {
  std::optional<double> score;  // nullopt when the denominator is empty
  VerdictCounts counts;
};

VerdictCounts count_verdicts(std::span<const ClaimVerdict> verdicts);

// verifiable_only: correct / (correct + incorrect); all_claims: correct / total.
FaithfulnessScore faithfulness_score(std::span<const ClaimVerdict> verdicts,
                                     ScoreMode mode = ScoreMode::kVerifiableOnly);

// Fraction of explanations (among those with at least one verifiable claim)
// that contain at least one incorrect claim. nullopt when none qualify.
std::optional<double> hallucination_rate(
    std::span<const std::vector<ClaimVerdict>> per_explanation);

// One JSON object per line for audit trails.
void write_verdicts(std::ostream& out, std::span<const ClaimVerdict> verdicts);

}  // namespace helm::faithfulness
