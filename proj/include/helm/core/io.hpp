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

// Readers and writers for every on-disk collection, plus cross-reference
// validation. Readers never stop at the first problem: each returns the
// collection it could parse together with a complete list of violations, and
// the `load_*` wrappers throw a ValidationError carrying all of them.
//
// Formats (UTF-8):
//   catalog       JSONL  {item_id, domain, title, attributes, popularity_rank?}
//   scenarios     JSON array of Scenario objects
//   transcripts   JSON array of Transcript objects
//   ratings       JSONL  RatingRecord objects
//   embeddings    JSONL  {key, vector}
//   judgments     JSONL  {scenario_id, relevant}
//   paraphrases   JSONL  {query_id, original, paraphrases, system_id?}

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "helm/core/applicability.hpp"
#include "helm/core/embeddings.hpp"
#include "helm/core/errors.hpp"
#include "helm/core/types.hpp"

namespace helm {

template <typename T>
struct Parsed {
  T value;
  std::vector<Violation> violations;
};

// ---- JSON conversion (one record) ----

nlohmann::ordered_json to_json(const ItemRecord& item);
nlohmann::ordered_json to_json(const Scenario& scenario);
nlohmann::ordered_json to_json(const Transcript& transcript);
nlohmann::ordered_json to_json(const RatingRecord& rating);
nlohmann::ordered_json to_json(const RelevanceJudgment& judgment);
nlohmann::ordered_json to_json(const ParaphraseSet& set);

// Each throws std::runtime_error describing the first malformed field.
ItemRecord item_from_json(const nlohmann::json& j);
Scenario scenario_from_json(const nlohmann::json& j);
Transcript transcript_from_json(const nlohmann::json& j);
RatingRecord rating_from_json(const nlohmann::json& j);
RelevanceJudgment judgment_from_json(const nlohmann::json& j);
ParaphraseSet paraphrase_set_from_json(const nlohmann::json& j);

// ---- stream parsers (structural + intra-collection invariants) ----

Parsed<Catalog> parse_catalog(std::istream& in, const std::string& source);
Parsed<std::vector<Scenario>> parse_scenarios(std::istream& in,
                                              const std::string& source);
Parsed<std::vector<Transcript>> parse_transcripts(std::istream& in,
                                                  const std::string& source);
Parsed<std::vector<RatingRecord>> parse_ratings(std::istream& in,
                                                const std::string& source);
Parsed<EmbeddingTable> parse_embeddings(std::istream& in,
                                        const std::string& source);
Parsed<std::vector<RelevanceJudgment>> parse_judgments(
    std::istream& in, const std::string& source);
Parsed<std::vector<ParaphraseSet>> parse_paraphrase_sets(
    std::istream& in, const std::string& source);

// ---- writers (inverse of the parsers) ----

void write_catalog(std::ostream& out, const Catalog& catalog);
void write_scenarios(std::ostream& out, const std::vector<Scenario>& scenarios);
void write_transcripts(std::ostream& out,
                       const std::vector<Transcript>& transcripts);
void write_ratings(std::ostream& out, const std::vector<RatingRecord>& ratings);
void write_embeddings(std::ostream& out, const EmbeddingTable& table);
void write_judgments(std::ostream& out,
                     const std::vector<RelevanceJudgment>& judgments);
void write_paraphrase_sets(std::ostream& out,
                           const std::vector<ParaphraseSet>& sets);

// ---- cross-reference validation ----

// Attribute names per domain, derived from the catalog.
using DomainSchema = std::map<Domain, std::set<std::string>>;
DomainSchema schema_of(const Catalog& catalog);

std::vector<Violation> validate_scenarios(const std::vector<Scenario>& scenarios,
                                          const Catalog& catalog,
                                          const std::string& source);
// `embeddings` may be null, in which case embedding refs are not checked.
std::vector<Violation> validate_transcripts(
    const std::vector<Transcript>& transcripts, const Catalog& catalog,
    const std::vector<Scenario>& scenarios, const EmbeddingTable* embeddings,
    const std::string& source);
// `transcripts` may be null; when present every rated (scenario, system)
// pair must have a transcript.
std::vector<Violation> validate_ratings(
    const std::vector<RatingRecord>& ratings,
    const std::vector<Scenario>& scenarios,
    const std::vector<Transcript>* transcripts, const std::string& source);
std::vector<Violation> validate_judgments(
    const std::vector<RelevanceJudgment>& judgments, const Catalog& catalog,
    const std::vector<Scenario>& scenarios, const std::string& source);
std::vector<Violation> validate_paraphrase_sets(
    const std::vector<ParaphraseSet>& sets, const EmbeddingTable& embeddings,
    const std::string& source);

// ---- file loaders: parse + validate, throw ValidationError / IoError ----

Catalog load_catalog(const std::filesystem::path& path);
std::vector<Scenario> load_scenarios(const std::filesystem::path& path,
                                     const Catalog& catalog);
std::vector<Transcript> load_transcripts(const std::filesystem::path& path,
                                         const Catalog& catalog,
                                         const std::vector<Scenario>& scenarios,
                                         const EmbeddingTable* embeddings);
std::vector<RatingRecord> load_ratings(
    const std::filesystem::path& path, const std::vector<Scenario>& scenarios,
    const std::vector<Transcript>* transcripts = nullptr);
EmbeddingTable load_embeddings(const std::filesystem::path& path);
std::vector<RelevanceJudgment> load_judgments(
    const std::filesystem::path& path, const Catalog& catalog,
    const std::vector<Scenario>& scenarios);
std::vector<ParaphraseSet> load_paraphrase_sets(
    const std::filesystem::path& path, const EmbeddingTable& embeddings);

// ---- bundles ----

struct BundlePaths {
  std::optional<std::filesystem::path> catalog;
  std::optional<std::filesystem::path> scenarios;
  std::optional<std::filesystem::path> transcripts;
  std::optional<std::filesystem::path> ratings;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> judgments;
  std::optional<std::filesystem::path> paraphrases;
  std::optional<std::filesystem::path> applicability;
};

// Everything one evaluation run reads. Immutable once validated.
struct Bundle {
  Catalog catalog;
  std::vector<Scenario> scenarios;
  std::vector<Transcript> transcripts;
  std::vector<RatingRecord> ratings;
  EmbeddingTable embeddings;
  std::vector<RelevanceJudgment> judgments;
  std::vector<ParaphraseSet> paraphrase_sets;
  ApplicabilityConfig applicability;

  bool has_judgments = false;

  const Scenario* find_scenario(const std::string& id) const;
  const Transcript* find_transcript(const std::string& scenario_id,
                                    const std::string& system_id) const;
  // Sorted, distinct.
  std::vector<std::string> system_ids() const;
};

// Loads every configured file and validates all cross-references. I/O
// failures and invariant violations are collected, never thrown.
Parsed<Bundle> load_bundle(const BundlePaths& paths);

}  // namespace helm
