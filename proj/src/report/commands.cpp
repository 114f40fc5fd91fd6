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

#include "helm/report/commands.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <memory>
#include <numeric>
#include <ostream>
#include <thread>

#include "helm/consistency/consistency.hpp"
#include "helm/core/errors.hpp"
#include "helm/metrics/autometrics.hpp"
#include "helm/reliability/reliability.hpp"
#include "helm/scoring/scoring.hpp"
#include "helm/session/http_api.hpp"
#include "helm/session/service.hpp"

namespace helm::report {

namespace {

using faithfulness::ClaimVerdict;

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Undefined metrics become nulls; anything else propagates.
template <typename F>
std::optional<double> defined(F&& f) {
  try {
    return f();
  } catch (const UndefinedMetricError&) {
    return std::nullopt;
  }
}

std::string with_k(const char* name, std::size_t k) {
  return std::string(name) + "@" + std::to_string(k);
}

Cell int_cell(std::size_t n) { return static_cast<std::int64_t>(n); }

void write_output(const RunConfig& config, const std::string& stem,
                  const std::string& text) {
  std::filesystem::create_directories(config.out_dir);
  const auto path = config.out_dir / (stem + "." + std::string(extension(config.format)));
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f << text;
}

void print_violations(std::ostream& err, const std::vector<Violation>& v) {
  for (const auto& x : v) err << x.to_string() << '\n';
}

// Loads the bundle, or prints every violation and returns nullopt.
std::optional<Bundle> checked_bundle(const RunConfig& config, std::ostream& err) {
  auto violations = check_config(config);
  auto parsed = load_bundle(config.paths);
  violations.insert(violations.end(), parsed.violations.begin(), parsed.violations.end());
  if (!violations.empty()) {
    print_violations(err, violations);
    err << violations.size() << " violation(s)\n";
    return std::nullopt;
  }
  return std::move(parsed.value);
}

// Wraps a command body: ValidationError -> 1, everything else -> 2.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    print_violations(err, e.violations());
    return kExitValidation;
  } catch (const session::InfeasibleAssignmentError& e) {
    err << "error: " << e.what() << '\n';
    for (const auto& s : e.shortfalls()) err << "  " << s << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

std::vector<std::vector<ClaimVerdict>> verdicts_for(
    std::span<const Transcript* const> transcripts, const Catalog& catalog,
    const faithfulness::RuleBasedExtractor& extractor) {
  std::vector<std::vector<ClaimVerdict>> out;
  for (const Transcript* t : transcripts) {
    for (const auto& rec : t->recommendations) {
      if (!rec.explanation) continue;
      std::vector<ClaimVerdict> vs;
      for (const auto& claim :
           extractor.extract(*rec.explanation, {t->scenario_id, t->system_id, rec.item_id})) {
        vs.push_back(faithfulness::verify(claim, catalog));
      }
      out.push_back(std::move(vs));
    }
  }
  return out;
}

struct SystemMetrics {
  std::size_t n_transcripts = 0;
  std::optional<double> gini, coverage, ild, hr, ndcg, faith, halluc, consistency,
      coherence, intent;
  std::optional<double> verbosity_mean, verbosity_median;
  std::vector<ClaimVerdict> verdicts;
  std::vector<std::string> notes;
};

SystemMetrics system_metrics(const std::string& system, const Bundle& b,
                             const RunConfig& c,
                             const metrics::ItemSimilarity& similarity,
                             const metrics::Judgments& judgments,
                             const faithfulness::RuleBasedExtractor* extractor) {
  SystemMetrics m;
  std::vector<const Transcript*> ts;
  for (const auto& t : b.transcripts) {
    if (t.system_id == system) ts.push_back(&t);
  }
  m.n_transcripts = ts.size();
  const std::size_t n_items = b.catalog.size();

  m.gini = defined([&] { return metrics::gini(metrics::build_exposure(ts, c.k, n_items)); });

  std::vector<metrics::RankedList> cov_lists;
  for (const Transcript* t : ts) cov_lists.push_back(t->top_k(c.coverage_k));
  m.coverage = defined([&] { return metrics::coverage_at_k(cov_lists, c.coverage_k, n_items); });

  std::vector<double> ilds;
  bool missing_vectors = false;
  for (const Transcript* t : ts) {
    const auto list = t->top_k(c.k);
    if (list.size() < 2) continue;
    try {
      ilds.push_back(metrics::intra_list_diversity(list, similarity));
    } catch (const std::out_of_range&) {
      missing_vectors = true;
    }
  }
  m.ild = mean_of(ilds);
  if (missing_vectors) {
    m.notes.push_back(system + ": ILD skipped lists with items lacking embeddings");
  }

  if (b.has_judgments) {
    std::vector<metrics::ScenarioList> judged;
    for (const Transcript* t : ts) {
      const auto it = judgments.find(t->scenario_id);
      if (it != judgments.end() && !it->second.empty()) {
        judged.push_back({t->scenario_id, t->top_k(c.k)});
      }
    }
    m.hr = defined([&] { return metrics::hit_rate_at_k(judged, judgments, c.k); });
    m.ndcg = defined([&] { return metrics::ndcg_at_k(judged, judgments, c.k); });
  }

  if (extractor) {
    const auto per_expl = verdicts_for(ts, b.catalog, *extractor);
    for (const auto& v : per_expl) m.verdicts.insert(m.verdicts.end(), v.begin(), v.end());
    m.faith = faithfulness::faithfulness_score(m.verdicts, c.faithfulness_mode).score;
    m.halluc = faithfulness::hallucination_rate(per_expl);
  }

  std::vector<ParaphraseSet> sets;
  for (const auto& s : b.paraphrase_sets) {
    if (s.system_id == system) sets.push_back(s);
  }
  if (auto summary = consistency::system_consistency(sets, b.embeddings)) {
    m.consistency = summary->mean;
  }

  std::vector<double> coh, intent;
  for (const Transcript* t : ts) {
    try {
      coh.push_back(metrics::dialogue_coherence(*t, b.embeddings));
    } catch (const UndefinedMetricError&) {
    } catch (const std::invalid_argument&) {
      // turns without embeddings
    }
    if (const Scenario* s = b.find_scenario(t->scenario_id)) {
      if (auto v = metrics::intent_coverage(*s, *t, b.catalog)) intent.push_back(*v);
    }
  }
  m.coherence = mean_of(coh);
  m.intent = mean_of(intent);

  std::vector<Transcript> own;
  for (const Transcript* t : ts) own.push_back(*t);
  const auto verb = metrics::verbosity_stats(own);
  if (const auto it = verb.find(system); it != verb.end()) {
    m.verbosity_mean = it->second.mean;
    m.verbosity_median = it->second.median;
  }
  return m;
}

session::AssignmentPlan plan_for(const Bundle& bundle, const RunConfig& config) {
  if (config.assignments && std::filesystem::exists(*config.assignments)) {
    return session::load_plan(*config.assignments);
  }
  return make_plan(bundle, config);
}

}  // namespace

// ---- validation ----

std::vector<Violation> validate_all(const RunConfig& config) {
  std::vector<Violation> v;
  auto require = [&](const std::optional<std::filesystem::path>& p, const char* what) {
    if (!p) v.push_back({"config", std::nullopt, std::string(what) + " path is required"});
  };
  require(config.paths.catalog, "catalog");
  require(config.paths.scenarios, "scenarios");
  require(config.paths.transcripts, "transcripts");
  if (config.k < 1) v.push_back({"config", std::nullopt, "k must be >= 1"});
  if (config.coverage_k < 1) v.push_back({"config", std::nullopt, "coverage_k must be >= 1"});

  auto parsed = load_bundle(config.paths);
  v.insert(v.end(), parsed.violations.begin(), parsed.violations.end());
  const Bundle& b = parsed.value;

  auto collect = [&](const std::optional<std::filesystem::path>& p, auto&& load) {
    if (!p) return;
    try {
      load(*p);
    } catch (const ValidationError& e) {
      v.insert(v.end(), e.violations().begin(), e.violations().end());
    } catch (const std::exception& e) {
      v.push_back({p->string(), std::nullopt, e.what()});
    }
  };
  collect(config.rules, [&](const auto& p) { faithfulness::load_rules(p, &b.catalog); });
  collect(config.evaluators, [&](const auto& p) { session::load_evaluators(p); });
  collect(config.assignments, [&](const auto& p) {
    if (!std::filesystem::exists(p)) return;  // written by `assign`
    const auto plan = session::load_plan(p);
    for (const auto& a : plan.assignments) {
      for (const auto& t : a.tasks) {
        if (!b.find_scenario(t.scenario_id)) {
          v.push_back({p.string(), std::nullopt,
                       "assignment of " + a.evaluator_id + " names unknown scenario " +
                           t.scenario_id});
        }
      }
    }
  });
  return v;
}

// ---- metrics ----

Report metrics_report(const Bundle& b, const RunConfig& c,
                      std::vector<ClaimVerdict>* verdicts) {
  Report r;
  r.name = "metrics";
  const auto judgments = metrics::index_judgments(b.judgments);
  const auto similarity = c.ild_similarity == IldSimilarity::kCosine
                              ? metrics::cosine_similarity(b.embeddings)
                              : metrics::jaccard_similarity(b.catalog);
  std::optional<faithfulness::RuleBasedExtractor> extractor;
  if (c.rules) extractor.emplace(faithfulness::load_rules(*c.rules, &b.catalog));

  const auto systems = b.system_ids();
  std::vector<std::future<SystemMetrics>> jobs;
  for (const auto& s : systems) {
    jobs.push_back(std::async(std::launch::async, [&, s] {
      return system_metrics(s, b, c, similarity, judgments,
                            extractor ? &*extractor : nullptr);
    }));
  }

  Table t;
  t.name = "automated_metrics";
  t.columns = {{"system"},
               {"transcripts"},
               {with_k("gini", c.k), Direction::kLowerBetter},
               {with_k("coverage", c.coverage_k), Direction::kHigherBetter},
               {with_k("ild", c.k), Direction::kHigherBetter},
               {with_k("hr", c.k), Direction::kHigherBetter},
               {with_k("ndcg", c.k), Direction::kHigherBetter},
               {"faithfulness", Direction::kHigherBetter},
               {"hallucination_rate", Direction::kLowerBetter},
               {"consistency", Direction::kHigherBetter},
               {"coherence", Direction::kHigherBetter},
               {"intent_coverage", Direction::kHigherBetter},
               {"verbosity_mean"},
               {"verbosity_median"}};
  for (std::size_t i = 0; i < systems.size(); ++i) {
    auto m = jobs[i].get();
    t.rows.push_back({systems[i], int_cell(m.n_transcripts), cell(m.gini), cell(m.coverage),
                      cell(m.ild), cell(m.hr), cell(m.ndcg), cell(m.faith),
                      cell(m.halluc), cell(m.consistency), cell(m.coherence),
                      cell(m.intent), cell(m.verbosity_mean), cell(m.verbosity_median)});
    r.notes.insert(r.notes.end(), m.notes.begin(), m.notes.end());
    if (verdicts) verdicts->insert(verdicts->end(), m.verdicts.begin(), m.verdicts.end());
  }
  r.tables.push_back(std::move(t));
  if (!b.has_judgments) r.notes.push_back("no relevance judgments: hr and ndcg are null");
  if (!c.rules) r.notes.push_back("no extraction rules: faithfulness columns are null");
  r.notes.push_back("faithfulness mode: " +
                    std::string(faithfulness::to_string(c.faithfulness_mode)));
  return r;
}

// ---- scores ----

Report score_report(const Bundle& b, const RunConfig& c) {
  if (b.ratings.empty()) throw std::invalid_argument("score needs ratings");
  Report r;
  r.name = "scores";
  const auto systems = scoring::score_systems(b.ratings);

  Table dims;
  dims.name = "dimension_scores";
  dims.columns.push_back({"system"});
  for (Dimension d : kAllDimensions) {
    dims.columns.push_back({std::string(to_string(d)), Direction::kHigherBetter});
    dims.columns.push_back({std::string(to_string(d)) + "_std"});
  }
  dims.columns.push_back({"hcs", Direction::kHigherBetter});
  dims.columns.push_back({"ratings"});

  Table constructs;
  constructs.name = "construct_means";
  constructs.columns.push_back({"system"});
  for (const auto& s : construct_table()) {
    constructs.columns.push_back({std::string(s.code), Direction::kHigherBetter});
  }

  for (const auto& s : systems) {
    std::vector<Cell> row{s.system_id};
    std::size_t n = 0;
    for (const auto& d : s.dimensions) {
      if (d) {
        row.emplace_back(d->score);
        row.emplace_back(d->std);
        n += d->n_ratings;
      } else {
        row.emplace_back(std::monostate{});
        row.emplace_back(std::monostate{});
      }
    }
    row.push_back(cell(s.hcs));
    row.push_back(int_cell(n));
    dims.rows.push_back(std::move(row));

    std::vector<Cell> crow{s.system_id};
    for (const auto& m : s.construct_means) crow.push_back(cell(m));
    constructs.rows.push_back(std::move(crow));
    r.notes.insert(r.notes.end(), s.diagnostics.begin(), s.diagnostics.end());
  }

  Table corr;
  corr.name = "hr_hcs_correlation";
  corr.columns = {{"k"}, {"pairs"}, {"pearson_r"}};
  std::optional<double> rho;
  std::size_t pairs = 0;
  if (b.has_judgments) {
    const auto judgments = metrics::index_judgments(b.judgments);
    std::vector<double> hits, scores;
    for (const auto& [key, h] : scoring::scenario_hcs(b.ratings)) {
      const auto j = judgments.find(key.first);
      const Transcript* t = b.find_transcript(key.first, key.second);
      if (j == judgments.end() || j->second.empty() || !t) continue;
      hits.push_back(metrics::hit_at_k(t->top_k(c.k), j->second, c.k));
      scores.push_back(h);
    }
    pairs = hits.size();
    rho = defined([&] { return metrics::pearson(hits, scores); });
    if (!rho) r.notes.push_back("hr/hcs correlation undefined (fewer than 3 pairs or constant input)");
  } else {
    r.notes.push_back("no relevance judgments: hr/hcs correlation is null");
  }
  corr.rows.push_back({int_cell(c.k), int_cell(pairs), cell(rho)});

  r.tables.push_back(std::move(dims));
  r.tables.push_back(std::move(constructs));
  r.tables.push_back(std::move(corr));
  return r;
}

// ---- reliability ----

Report reliability_report(const Bundle& b, const RunConfig& /*config*/,
                          const session::AssignmentPlan* plan) {
  std::vector<Scenario> scenarios = b.scenarios;
  if (plan) {
    for (auto& s : scenarios) {
      if (plan->calibration_ids.contains(s.scenario_id)) s.calibration = true;
    }
  }
  const auto blocks = reliability::calibration_blocks(b.ratings, scenarios);

  Report r;
  r.name = "reliability";
  Table t;
  t.name = "inter_rater_reliability";
  t.columns = {{"dimension"},
               {"domain"},
               {"subjects"},
               {"raters"},
               {"icc", Direction::kHigherBetter},
               {"ci_lo"},
               {"ci_hi"},
               {"icc_single"},
               {"kappa", Direction::kHigherBetter},
               {"agreement"}};
  for (const auto& block : blocks) {
    std::vector<Cell> row{std::string(to_string(block.dimension)), block.domain,
                          int_cell(block.continuous.subjects()),
                          int_cell(block.continuous.raters())};
    try {
      const auto res = reliability::icc(block.continuous);
      row.insert(row.end(), {res.icc, res.ci_lo, res.ci_hi, res.icc_single});
    } catch (const DegenerateInputError& e) {
      row.insert(row.end(), 4, std::monostate{});
      r.notes.push_back(std::string(to_string(block.dimension)) + "/" + block.domain +
                        ": " + e.what());
    }
    try {
      row.emplace_back(reliability::fleiss_kappa(
          reliability::likert_counts(block.categorical),
          static_cast<int>(block.categorical.raters())));
    } catch (const DegenerateInputError& e) {
      row.emplace_back(std::monostate{});
      r.notes.push_back(std::string(to_string(block.dimension)) + "/" + block.domain +
                        ": " + e.what());
    }
    if (std::holds_alternative<double>(row[4])) {
      row.emplace_back(std::string(reliability::classify_icc(std::get<double>(row[4]))));
    } else {
      row.emplace_back(std::monostate{});
    }
    t.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(t));
  return r;
}

// ---- assignment ----

session::AssignmentPlan make_plan(const Bundle& b, const RunConfig& c) {
  if (!c.evaluators) throw std::invalid_argument("config has no evaluators file");
  const auto evaluators = session::load_evaluators(*c.evaluators);
  const auto systems = b.system_ids();
  return session::build_assignments(b.scenarios, systems, evaluators, c.assignment,
                                    c.seed);
}

Report assignment_report(const Bundle& b, const session::AssignmentPlan& plan) {
  Report r;
  r.name = "assignments";
  Table t;
  t.name = "assignments";
  t.columns = {{"evaluator"}, {"panel"}, {"scenarios"}, {"tasks"}, {"calibration"}};
  for (int i = 0; i < kNumCategories; ++i) {
    t.columns.push_back({std::string(to_string(static_cast<ScenarioCategory>(i)))});
  }
  for (const auto& a : plan.assignments) {
    const auto ids = a.scenario_ids();
    std::array<std::size_t, kNumCategories> per{};
    std::size_t calib = 0;
    for (const auto& id : ids) {
      if (const Scenario* s = b.find_scenario(id)) ++per[static_cast<std::size_t>(s->category)];
      if (plan.calibration_ids.contains(id)) ++calib;
    }
    std::vector<Cell> row{a.evaluator_id, a.panel.empty() ? std::string("all") : a.panel,
                          int_cell(ids.size()), int_cell(a.tasks.size()), int_cell(calib)};
    for (auto n : per) row.push_back(int_cell(n));
    t.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(t));
  return r;
}

// ---- subcommands ----

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto v = validate_all(config);
    Report r;
    r.name = "validation";
    Table t;
    t.name = "violations";
    t.columns = {{"source"}, {"line"}, {"message"}};
    for (const auto& x : v) {
      t.rows.push_back({x.source,
                        x.line ? Cell(static_cast<std::int64_t>(*x.line)) : Cell(),
                        x.message});
    }
    r.tables.push_back(std::move(t));
    r.notes.push_back(v.empty() ? "bundle is valid"
                                : std::to_string(v.size()) + " violation(s)");
    out << render(r, config.format);
    print_violations(err, v);
    return v.empty() ? kExitOk : kExitValidation;
  });
}

int cmd_metrics(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto b = checked_bundle(config, err);
    if (!b) return kExitValidation;
    std::vector<ClaimVerdict> verdicts;
    const auto text = render(metrics_report(*b, config, &verdicts), config.format);
    write_output(config, "metrics", text);
    if (config.rules) {
      std::ofstream f(config.out_dir / "verdicts.jsonl", std::ios::trunc);
      faithfulness::write_verdicts(f, verdicts);
    }
    out << text;
    return kExitOk;
  });
}

int cmd_score(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto b = checked_bundle(config, err);
    if (!b) return kExitValidation;
    if (b->ratings.empty()) {
      err << "error: score needs ratings (set \"ratings\" in the config)\n";
      return kExitValidation;
    }
    const auto text = render(score_report(*b, config), config.format);
    write_output(config, "scores", text);
    out << text;
    return kExitOk;
  });
}

int cmd_reliability(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto b = checked_bundle(config, err);
    if (!b) return kExitValidation;
    std::optional<session::AssignmentPlan> plan;
    if (config.assignments && std::filesystem::exists(*config.assignments)) {
      plan = session::load_plan(*config.assignments);
    }
    const auto text = render(reliability_report(*b, config, plan ? &*plan : nullptr),
                             config.format);
    write_output(config, "reliability", text);
    out << text;
    return kExitOk;
  });
}

int cmd_assign(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto b = checked_bundle(config, err);
    if (!b) return kExitValidation;
    const auto plan = make_plan(*b, config);
    std::filesystem::create_directories(config.out_dir);
    const auto path = config.assignments.value_or(config.out_dir / "assignments.json");
    {
      std::ofstream f(path, std::ios::trunc);
      if (!f) throw IoError("cannot write " + path.string());
      session::write_plan(f, plan);
    }
    const auto text = render(assignment_report(*b, plan), config.format);
    write_output(config, "assignments_summary", text);
    out << text;
    return kExitOk;
  });
}

int cmd_report(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto b = checked_bundle(config, err);
    if (!b) return kExitValidation;
    Report all;
    all.name = "report";
    auto absorb = [&](Report r) {
      write_output(config, r.name, render(r, config.format));
      for (auto& t : r.tables) all.tables.push_back(std::move(t));
      for (auto& n : r.notes) all.notes.push_back(r.name + ": " + n);
    };
    absorb(metrics_report(*b, config));
    if (b->ratings.empty()) {
      all.notes.push_back("no ratings: scores and reliability skipped");
    } else {
      absorb(score_report(*b, config));
      std::optional<session::AssignmentPlan> plan;
      if (config.assignments && std::filesystem::exists(*config.assignments)) {
        plan = session::load_plan(*config.assignments);
      }
      try {
        absorb(reliability_report(*b, config, plan ? &*plan : nullptr));
      } catch (const DegenerateInputError& e) {
        all.notes.push_back(std::string("reliability skipped: ") + e.what());
      }
    }
    const auto text = render(all, config.format);
    write_output(config, "report", text);
    out << text;
    return kExitOk;
  });
}

int cmd_serve(const RunConfig& config, std::ostream& out, std::ostream& err,
              const std::function<void()>& wait_for_shutdown,
              const std::function<void(int)>& on_ready) {
  return guarded(err, [&] {
    auto b = checked_bundle(config, err);
    if (!b) {
      err << "refusing to serve an invalid bundle\n";
      return kExitValidation;
    }
    auto bundle = std::make_shared<const Bundle>(std::move(*b));
    auto plan = plan_for(*bundle, config);
    if (!config.evaluators) throw std::invalid_argument("config has no evaluators file");
    auto evaluators = session::load_evaluators(*config.evaluators);

    std::filesystem::create_directories(config.out_dir);
    session::ServiceConfig sc;
    sc.session_limit_ms = config.session_limit_ms;
    sc.log_path = config.event_log.value_or(config.out_dir / "events.jsonl");
    sc.snapshot_path = sc.log_path->string() + ".snapshot";
    sc.snapshot_every = config.snapshot_every;
    session::SessionService service(bundle, std::move(plan), std::move(evaluators), sc);

    session::ApiServer server(service, session::system_now_ms,
                              session::ApiOptions{config.admin_token});
    const int port = server.bind(config.host, config.port);
    std::thread runner([&] { server.run(); });
    server.wait_until_ready();
    out << "serving /api/v1 on http://" << config.host << ":" << port << std::endl;
    if (on_ready) on_ready(port);
    wait_for_shutdown();
    server.stop();
    runner.join();
    service.flush();
    service.snapshot();
    out << "stopped; event log flushed to " << sc.log_path->string() << std::endl;
    return kExitOk;
  });
}

}  // namespace helm::report
