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

#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "helm/core/constructs.hpp"
#include "helm/core/embeddings.hpp"
#include "helm/core/errors.hpp"
#include "helm/faithfulness/faithfulness.hpp"
#include "helm/metrics/autometrics.hpp"
#include "helm/reliability/reliability.hpp"
#include "helm/report/commands.hpp"
#include "helm/report/config.hpp"
#include "helm/scoring/scoring.hpp"

namespace py = pybind11;

namespace {

helm::faithfulness::ScoreMode mode_of(const std::string& s) {
  auto m = helm::faithfulness::parse_score_mode(s);
  if (!m) throw py::value_error("mode must be verifiable_only or all_claims");
  return *m;
}

helm::faithfulness::Verdict verdict_of(const std::string& s) {
  using helm::faithfulness::Verdict;
  for (auto v : {Verdict::kCorrect, Verdict::kIncorrect, Verdict::kUnverifiable}) {
    if (helm::faithfulness::to_string(v) == s) return v;
  }
  throw py::value_error("unknown verdict '" + s + "'");
}

py::tuple run_command(const std::string& command, const std::string& config_path) {
  using namespace helm::report;
  std::ostringstream out, err;
  int rc = kExitRuntime;
  try {
    const auto config = load_config(config_path);
    if (command == "validate") rc = cmd_validate(config, out, err);
    else if (command == "metrics") rc = cmd_metrics(config, out, err);
    else if (command == "score") rc = cmd_score(config, out, err);
    else if (command == "reliability") rc = cmd_reliability(config, out, err);
    else if (command == "assign") rc = cmd_assign(config, out, err);
    else if (command == "report") rc = cmd_report(config, out, err);
    else throw py::value_error("unknown command '" + command + "'");
  } catch (const helm::ValidationError& e) {
    for (const auto& v : e.violations()) err << v.to_string() << '\n';
    rc = kExitValidation;
  } catch (const helm::IoError& e) {
    err << e.what() << '\n';
    rc = kExitValidation;
  }
  return py::make_tuple(rc, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_helm, m) {
  m.doc() = "Metrics, scoring and reliability statistics for recommender evaluation";

  py::register_exception<helm::UndefinedMetricError>(m, "UndefinedMetricError",
                                                     PyExc_ValueError);
  py::register_exception<helm::DegenerateInputError>(m, "DegenerateInputError",
                                                     PyExc_ValueError);

  m.def("gini", [](const std::vector<double>& counts) { return helm::metrics::gini(counts); },
        py::arg("counts"));
  m.def("coverage_at_k",
        [](const std::vector<std::vector<std::string>>& lists, std::size_t k,
           std::size_t catalog_size) {
          return helm::metrics::coverage_at_k(lists, k, catalog_size);
        },
        py::arg("lists"), py::arg("k"), py::arg("catalog_size"));
  m.def("hit_at_k",
        [](const std::vector<std::string>& list, const std::set<std::string>& relevant,
           std::size_t k) { return helm::metrics::hit_at_k(list, relevant, k); },
        py::arg("ranked"), py::arg("relevant"), py::arg("k"));
  m.def("ndcg_at_k",
        [](const std::vector<std::string>& list, const std::set<std::string>& relevant,
           std::size_t k) { return helm::metrics::ndcg_single(list, relevant, k); },
        py::arg("ranked"), py::arg("relevant"), py::arg("k"));
  m.def("jaccard", &helm::metrics::jaccard, py::arg("a"), py::arg("b"));
  m.def("pearson",
        [](const std::vector<double>& x, const std::vector<double>& y) {
          return helm::metrics::pearson(x, y);
        },
        py::arg("x"), py::arg("y"));
  m.def("cosine",
        [](const std::vector<double>& a, const std::vector<double>& b) {
          return helm::cosine(a, b);
        },
        py::arg("a"), py::arg("b"));

  m.def("hcs", [](const std::vector<double>& dims) { return helm::scoring::hcs(dims); },
        py::arg("dimension_scores"));
  m.def("dimension_score",
        [](const std::vector<std::optional<double>>& means) {
          return helm::scoring::dimension_score(means);
        },
        py::arg("construct_means"));

  m.def("icc",
        [](const std::vector<std::vector<double>>& rows, double confidence) {
          const auto r = helm::reliability::icc(
              helm::reliability::RatingMatrix::from_rows(rows), confidence);
          py::dict d;
          d["icc"] = r.icc;
          d["icc_single"] = r.icc_single;
          d["ci"] = py::make_tuple(r.ci_lo, r.ci_hi);
          d["subjects"] = r.n_subjects;
          d["raters"] = r.n_raters;
          return d;
        },
        py::arg("rows"), py::arg("confidence") = 0.95);
  m.def("fleiss_kappa", &helm::reliability::fleiss_kappa, py::arg("counts"),
        py::arg("raters_per_subject"));

  m.def("faithfulness",
        [](const std::vector<std::string>& verdicts, const std::string& mode) {
          std::vector<helm::faithfulness::ClaimVerdict> vs;
          for (const auto& v : verdicts) vs.push_back({{}, verdict_of(v)});
          return helm::faithfulness::faithfulness_score(vs, mode_of(mode)).score;
        },
        py::arg("verdicts"), py::arg("mode") = "verifiable_only");

  m.def("anchor_text", [](int v) { return std::string(helm::anchor_text(v)); },
        py::arg("value"));
  m.def("constructs", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& s : helm::construct_table()) {
      out.emplace_back(std::string(s.code), std::string(helm::to_string(s.dimension)));
    }
    return out;
  });

  m.def("run", &run_command, py::arg("command"), py::arg("config"),
        "Run a subcommand; returns (exit_code, stdout, stderr).");
}
