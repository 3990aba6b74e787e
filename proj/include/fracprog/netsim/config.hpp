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
#include <string>

namespace fracprog::netsim {

enum class ScenarioKind { SisoHex, MimoHex, EeSingle, EeBroadcast, Textbook };
enum class Algorithm { Direct, Closed, FixedPoint, Dinkelbach, Nested, MaxMin, Utility };

std::string to_string(ScenarioKind kind);
std::string to_string(Algorithm algorithm);
/// Accepts the names produced by to_string, case-insensitively. Throws UsageError.
ScenarioKind parse_kind(const std::string& text);
Algorithm parse_algorithm(const std::string& text);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::SisoHex;
  std::uint64_t seed = 1;

  std::size_t cells = 7;
  std::size_t users_per_cell = 1;
  std::size_t bs_antennas = 1;
  std::size_t user_antennas = 1;
  std::size_t bands = 1;
  double isd_km = 0.8;

  double bandwidth_hz = 10e6;
  double p_max_dbm = 43.0;
  double noise_dbm = -100.0;
  double p_on_dbm = 5.0;

  double shadowing_db_std = 8.0;
  double pathloss_db = 120.0;  // fixed loss of the energy-efficiency scenarios

  Algorithm algorithm = Algorithm::Closed;
  double tol = 1e-6;
  int max_iters = 500;

  /// Throws UsageError naming the offending key.
  void validate() const;
  /// Flat `key = value` form accepted by parse_config.
  std::string to_text() const;
};

/// Defaults of each scenario.
ScenarioConfig default_config(ScenarioKind kind);

/// Parses `key = value` lines (`#` starts a comment). scenario.kind, when
/// present, selects the defaults the remaining keys override; otherwise
/// `base` is used. Unknown keys and malformed values are errors.
ScenarioConfig parse_config(const std::string& text, const ScenarioConfig& base);
ScenarioConfig load_config(const std::string& path, const ScenarioConfig& base);

}  // namespace fracprog::netsim
