// Copyright 2026 The fracprog Authors
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

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "fracprog/netsim/config.hpp"
#include "fracprog/netsim/experiment.hpp"
#include "fracprog/types.hpp"

namespace fs = std::filesystem;
using namespace fracprog;
using namespace fracprog::netsim;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> algo;
  std::optional<double> tol;
  std::optional<int> max_iters;
  std::string out = "out";
  std::size_t seeds = 1;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "Scenario file of key = value lines")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Random seed (first seed of a batch)");
  cmd->add_option("--algo", o.algo, "direct|closed|fixed-point|dinkelbach|nested|maxmin|utility");
  cmd->add_option("--tol", o.tol, "Relative stopping tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", o.max_iters, "Outer iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--seeds", o.seeds, "Run this many consecutive seeds")->check(CLI::PositiveNumber);
}

bool kind_allowed(const std::string& command, ScenarioKind kind) {
  if (command == "power") return kind == ScenarioKind::SisoHex;
  if (command == "beamform") return kind == ScenarioKind::MimoHex;
  if (command == "ee") return kind == ScenarioKind::EeSingle || kind == ScenarioKind::EeBroadcast;
  return kind == ScenarioKind::Textbook;
}

ScenarioConfig build_config(const std::string& command, const Options& o) {
  ScenarioKind kind = ScenarioKind::Textbook;
  if (command == "power") kind = ScenarioKind::SisoHex;
  if (command == "beamform") kind = ScenarioKind::MimoHex;
  if (command == "ee")
    kind = (o.algo && parse_algorithm(*o.algo) == Algorithm::Nested) ? ScenarioKind::EeBroadcast
                                                                      : ScenarioKind::EeSingle;
  ScenarioConfig cfg = default_config(kind);
  if (!o.config.empty()) {
    cfg = load_config(o.config, cfg);
    if (!kind_allowed(command, cfg.kind))
      throw UsageError("scenario.kind: '" + to_string(cfg.kind) + "' cannot be run by '" + command + "'");
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.algo) cfg.algorithm = parse_algorithm(*o.algo);
  if (o.tol) cfg.tol = *o.tol;
  if (o.max_iters) cfg.max_iters = *o.max_iters;
  cfg.validate();
  return cfg;
}

int run(const std::string& command, const Options& o) {
  ScenarioConfig cfg = build_config(command, o);
  const std::uint64_t first = cfg.seed;
  bool all_converged = true;
  for (std::size_t k = 0; k < o.seeds; ++k) {
    cfg.seed = first + k;
    const fs::path dir = o.seeds > 1 ? fs::path(o.out) / ("seed_" + std::to_string(cfg.seed)) : fs::path(o.out);
    const RunSummary s = run_experiment(cfg, dir);
    std::printf("%s %s seed=%llu objective=%.6g %s iterations=%zu converged=%s -> %s\n", s.scenario.c_str(),
                s.algorithm.c_str(), static_cast<unsigned long long>(s.seed), s.final_display, s.display_unit.c_str(),
                s.iterations, s.converged ? "yes" : "no", dir.string().c_str());
    all_converged = all_converged && s.converged;
  }
  return all_converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional programming solvers and wireless network experiments"};
  app.require_subcommand(1);
  Options opts;
  for (const char* name : {"power", "beamform", "ee", "textbook"}) {
    const char* help = std::string(name) == "power"      ? "SISO cellular power control"
                       : std::string(name) == "beamform" ? "MIMO cellular beamforming"
                       : std::string(name) == "ee"       ? "Energy-efficiency maximization"
                                                         : "Deterministic textbook fixtures";
    add_common(app.add_subcommand(name, help), opts);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    return run(app.get_subcommands().front()->get_name(), opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
