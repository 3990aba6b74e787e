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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fracprog/netsim/config.hpp"
#include "fracprog/netsim/textbook.hpp"
#include "fracprog/trace.hpp"

namespace fracprog::netsim {

struct RunSummary {
  std::string scenario;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::string instance_hash;  // hex
  double final_objective = 0.0;  // nats (or nats per joule per hertz)
  double final_display = 0.0;
  std::string display_unit;
  std::size_t iterations = 0;
  double wall_ms = 0.0;
  bool converged = false;
  double residual = 0.0;
  std::string trace_file;
  /// Baselines and scenario-specific figures, keyed by name.
  std::map<std::string, double> extras;
};

struct TraceRow {
  std::size_t iter = 0;
  double objective = 0.0;
  double display = 0.0;
  double residual = 0.0;
  double elapsed_ms = 0.0;
};

struct ExperimentResult {
  RunSummary summary;
  std::vector<TraceRow> trace;
  std::vector<RateRow> qt_rate;          // textbook only
  std::vector<RateRow> dinkelbach_rate;  // textbook only
};

/// Generates the scenario, runs the configured solver and collects the trace.
ExperimentResult execute(const ScenarioConfig& cfg);

/// execute() plus trace.csv and summary.json (and the rate tables for the
/// textbook scenario) under out_dir.
RunSummary run_experiment(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& rows);
void write_rate_csv(const std::filesystem::path& path, const std::vector<RateRow>& rows);
void write_summary_json(const std::filesystem::path& path, const RunSummary& summary);

}  // namespace fracprog::netsim
