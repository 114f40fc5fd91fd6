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

// helm: offline evaluation of conversational recommenders.
//
//   helm validate    --config run.json
//   helm metrics     --config run.json --k 10 --format md
//   helm score       --config run.json
//   helm reliability --config run.json
//   helm assign      --config run.json --seed 7
//   helm serve       --config run.json --port 8080
//   helm report      --config run.json --out-dir out/

#include <csignal>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "helm/report/commands.hpp"
#include "helm/report/config.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> faithfulness_mode;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  std::optional<int> port;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Run configuration (JSON)")->required();
  cmd->add_option("--k", o.k, "Cutoff for top-k metrics")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--faithfulness-mode", o.faithfulness_mode,
                  "verifiable_only or all_claims")
      ->check(CLI::IsMember({"verifiable_only", "all_claims"}));
  cmd->add_option("--out-dir", o.out_dir, "Output directory");
  cmd->add_option("--format", o.format, "json, csv or md")
      ->check(CLI::IsMember({"json", "csv", "md"}));
  cmd->add_option("--port", o.port, "HTTP port for serve")->check(CLI::Range(0, 65535));
}

helm::report::RunConfig resolve(const Overrides& o) {
  auto c = helm::report::load_config(o.config);
  if (o.k) c.k = *o.k;
  if (o.seed) c.seed = *o.seed;
  if (o.faithfulness_mode) {
    c.faithfulness_mode = *helm::faithfulness::parse_score_mode(*o.faithfulness_mode);
  }
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.format) c.format = *helm::report::parse_format(*o.format);
  if (o.port) c.port = *o.port;
  return c;
}

// Blocks SIGINT/SIGTERM in every thread and waits for one of them here, so
// shutdown runs outside signal-handler context.
void wait_for_signal(const sigset_t& set) {
  int sig = 0;
  sigwait(&set, &sig);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offline evaluation harness for conversational recommenders"};
  app.require_subcommand(1);
  Overrides o;
  const char* names[] = {"validate", "metrics", "score", "reliability",
                         "assign",   "serve",   "report"};
  const char* help[] = {
      "Check every input file and cross-reference",
      "Automated metrics per system",
      "Dimension scores, HCS and the HR/HCS correlation",
      "ICC and Fleiss' kappa on the calibration block",
      "Build balanced evaluator assignments",
      "Serve the rating API",
      "All reports in one run",
  };
  for (std::size_t i = 0; i < std::size(names); ++i) {
    add_common(app.add_subcommand(names[i], help[i]), o);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : helm::report::kExitValidation;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  helm::report::RunConfig config;
  try {
    config = resolve(o);
  } catch (const helm::ValidationError& e) {
    for (const auto& v : e.violations()) std::cerr << v.to_string() << '\n';
    return helm::report::kExitValidation;
  } catch (const helm::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return helm::report::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return helm::report::kExitRuntime;
  }

  using namespace helm::report;
  if (cmd == "validate") return cmd_validate(config, std::cout, std::cerr);
  if (cmd == "metrics") return cmd_metrics(config, std::cout, std::cerr);
  if (cmd == "score") return cmd_score(config, std::cout, std::cerr);
  if (cmd == "reliability") return cmd_reliability(config, std::cout, std::cerr);
  if (cmd == "assign") return cmd_assign(config, std::cout, std::cerr);
  if (cmd == "report") return cmd_report(config, std::cout, std::cerr);

  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  return cmd_serve(config, std::cout, std::cerr, [&] { wait_for_signal(set); });
}
