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

#include "fracprog/netsim/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "fracprog/types.hpp"

namespace fracprog::netsim {

namespace {

const std::array<std::pair<ScenarioKind, const char*>, 5> kKinds{{{ScenarioKind::SisoHex, "siso_hex"},
                                                                   {ScenarioKind::MimoHex, "mimo_hex"},
                                                                   {ScenarioKind::EeSingle, "ee_single"},
                                                                   {ScenarioKind::EeBroadcast, "ee_broadcast"},
                                                                   {ScenarioKind::Textbook, "textbook"}}};

const std::array<std::pair<Algorithm, const char*>, 7> kAlgorithms{{{Algorithm::Direct, "direct"},
                                                                     {Algorithm::Closed, "closed"},
                                                                     {Algorithm::FixedPoint, "fixed-point"},
                                                                     {Algorithm::Dinkelbach, "dinkelbach"},
                                                                     {Algorithm::Nested, "nested"},
                                                                     {Algorithm::MaxMin, "maxmin"},
                                                                     {Algorithm::Utility, "utility"}}};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out))
    throw UsageError(key + ": expected a real number, got '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw UsageError(key + ": expected a nonnegative integer, got '" + v + "'");
  return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw UsageError(key + ": " + what);
}

}  // namespace

std::string to_string(ScenarioKind kind) {
  for (const auto& [k, name] : kKinds)
    if (k == kind) return name;
  return "unknown";
}

std::string to_string(Algorithm algorithm) {
  for (const auto& [a, name] : kAlgorithms)
    if (a == algorithm) return name;
  return "unknown";
}

ScenarioKind parse_kind(const std::string& text) {
  const std::string t = lower(trim(text));
  for (const auto& [k, name] : kKinds)
    if (t == name) return k;
  throw UsageError("scenario.kind: unknown scenario '" + text + "'");
}

Algorithm parse_algorithm(const std::string& text) {
  const std::string t = lower(trim(text));
  for (const auto& [a, name] : kAlgorithms)
    if (t == name) return a;
  throw UsageError("solver.algorithm: unknown algorithm '" + text + "'");
}

ScenarioConfig default_config(ScenarioKind kind) {
  ScenarioConfig c;
  c.kind = kind;
  switch (kind) {
    case ScenarioKind::SisoHex:
      break;
    case ScenarioKind::MimoHex:
      c.users_per_cell = 2;
      c.bs_antennas = 2;
      c.user_antennas = 2;
      break;
    case ScenarioKind::EeSingle:
    case ScenarioKind::EeBroadcast:
      c.cells = 1;
      c.bandwidth_hz = 1e6;
      c.p_max_dbm = 21.0;
      c.shadowing_db_std = 0.0;
      c.algorithm = kind == ScenarioKind::EeSingle ? Algorithm::Direct : Algorithm::Nested;
      if (kind == ScenarioKind::EeBroadcast) {
        c.users_per_cell = 3;
        c.bs_antennas = 3;
        c.user_antennas = 2;
      }
      break;
    case ScenarioKind::Textbook:
      c.cells = 1;
      c.shadowing_db_std = 0.0;
      c.algorithm = Algorithm::Direct;
      c.tol = 1e-12;
      break;
  }
  return c;
}

void ScenarioConfig::validate() const {
  require(cells >= 1, "network.cells", "must be at least 1");
  require(users_per_cell >= 1, "network.users_per_cell", "must be at least 1");
  require(bs_antennas >= 1, "network.bs_antennas", "must be at least 1");
  require(user_antennas >= 1, "network.user_antennas", "must be at least 1");
  require(bands >= 1, "network.bands", "must be at least 1");
  require(isd_km > 0.0, "network.isd_km", "must be positive");
  require(bandwidth_hz > 0.0, "radio.bandwidth_hz", "must be positive");
  require(shadowing_db_std >= 0.0, "channel.shadowing_db_std", "must be nonnegative");
  require(tol > 0.0, "solver.tol", "must be positive");
  require(max_iters >= 1, "solver.max_iters", "must be at least 1");

  auto allow = [&](std::initializer_list<Algorithm> ok) {
    require(std::find(ok.begin(), ok.end(), algorithm) != ok.end(), "solver.algorithm",
            "'" + to_string(algorithm) + "' is not available for scenario '" + to_string(kind) + "'");
  };
  switch (kind) {
    case ScenarioKind::SisoHex:
      require(cells == 7, "network.cells", "the wrapped hexagonal layout has exactly 7 cells");
      require(bs_antennas == 1 && user_antennas == 1, "network.bs_antennas", "SISO scenarios use single antennas");
      if (bands > 1)
        allow({Algorithm::Direct});
      else
        allow({Algorithm::Direct, Algorithm::Closed, Algorithm::FixedPoint, Algorithm::MaxMin, Algorithm::Utility});
      break;
    case ScenarioKind::MimoHex:
      require(cells == 7, "network.cells", "the wrapped hexagonal layout has exactly 7 cells");
      require(bands == 1, "network.bands", "MIMO scenarios are single band");
      allow({Algorithm::Direct, Algorithm::Closed});
      break;
    case ScenarioKind::EeSingle:
      require(cells == 1 && users_per_cell == 1, "network.users_per_cell", "the single-link scenario has one link");
      allow({Algorithm::Direct, Algorithm::Dinkelbach});
      break;
    case ScenarioKind::EeBroadcast:
      require(cells == 1, "network.cells", "the broadcast scenario has one sender");
      allow({Algorithm::Nested, Algorithm::Dinkelbach});
      break;
    case ScenarioKind::Textbook:
      break;
  }
}

std::string ScenarioConfig::to_text() const {
  std::ostringstream os;
  os << "scenario.kind = " << to_string(kind) << '\n'
     << "scenario.seed = " << seed << '\n'
     << "network.cells = " << cells << '\n'
     << "network.users_per_cell = " << users_per_cell << '\n'
     << "network.bs_antennas = " << bs_antennas << '\n'
     << "network.user_antennas = " << user_antennas << '\n'
     << "network.bands = " << bands << '\n'
     << "network.isd_km = " << fmt(isd_km) << '\n'
     << "radio.bandwidth_hz = " << fmt(bandwidth_hz) << '\n'
     << "radio.p_max_dbm = " << fmt(p_max_dbm) << '\n'
     << "radio.noise_dbm = " << fmt(noise_dbm) << '\n'
     << "radio.p_on_dbm = " << fmt(p_on_dbm) << '\n'
     << "channel.shadowing_db_std = " << fmt(shadowing_db_std) << '\n'
     << "channel.pathloss_db = " << fmt(pathloss_db) << '\n'
     << "solver.algorithm = " << to_string(algorithm) << '\n'
     << "solver.tol = " << fmt(tol) << '\n'
     << "solver.max_iters = " << max_iters << '\n';
  return os.str();
}

ScenarioConfig parse_config(const std::string& text, const ScenarioConfig& base) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw UsageError("config line " + std::to_string(lineno) + ": empty key or value");
    for (const auto& [k, v] : entries)
      if (k == key) throw UsageError(key + ": given more than once");
    entries.emplace_back(std::move(key), std::move(value));
  }

  ScenarioConfig c = base;
  for (const auto& [k, v] : entries)
    if (k == "scenario.kind") c = default_config(parse_kind(v));

  using Setter = void (*)(ScenarioConfig&, const std::string&, const std::string&);
  static const std::map<std::string, Setter> setters{
      {"scenario.kind", [](ScenarioConfig&, const std::string&, const std::string&) {}},
      {"scenario.seed", [](ScenarioConfig& s, const std::string& k, const std::string& v) { s.seed = to_u64(k, v); }},
      {"network.cells",
       [](ScenarioConfig& s, const std::string& k, const std::string& v) { s.cells = to_u64(k, v); }},
      {"network.users_per_cell",
       [](ScenarioConfig& s, const std::string& k, const std::string& v) { s.users_per_cell = to_u64(k, v); }},
      {"network.bs_antennas",
       [](ScenarioConfig& s, const std::string& k, const std::string& v) { s.bs_antennas = to_u64(k, v); }},
      {"network.user_antennas",
       [](ScenarioConfig& s, const std::string& k, const std::string& v) { s.user_antennas = to_u64(k, v); }},
      {"network.bands", [](ScenarioConfig& s, const std::string& k, const std::string& v) { s.bands = to_u64(k, v); }},
      {"network.isd_km",
       [](ScenarioConfig& s, const std::string& k, const std::string& v) { s.isd_km = to_double(k, v); }},
      {"radio.bandwidth_hz",
       [](ScenarioConfig& s, const std::string& k, const std::string& v) { s.bandwidth_hz = to_double(k, v); }},
      {"radio.p_max_dbm",
       [](ScenarioConfig& s, const std::string& k, const std::string& v) { s.p_max_dbm = to_double(k, v); }},
      {"radio.noise_dbm",
       [](ScenarioConfig& s, const std::string& k, const std::string& v) { s.noise_dbm = to_double(k, v); }},
      {"radio.p_on_dbm",
       [](ScenarioConfig& s, const std::string& k, const std::string& v) { s.p_on_dbm = to_double(k, v); }},
      {"channel.shadowing_db_std",
       [](ScenarioConfig& s, const std::string& k, const std::string& v) { s.shadowing_db_std = to_double(k, v); }},
      {"channel.pathloss_db",
       [](ScenarioConfig& s, const std::string& k, const std::string& v) { s.pathloss_db = to_double(k, v); }},
      {"solver.algorithm",
       [](ScenarioConfig& s, const std::string&, const std::string& v) { s.algorithm = parse_algorithm(v); }},
      {"solver.tol", [](ScenarioConfig& s, const std::string& k, const std::string& v) { s.tol = to_double(k, v); }},
      {"solver.max_iters",
       [](ScenarioConfig& s, const std::string& k, const std::string& v) {
         const auto n = to_u64(k, v);
         require(n >= 1 && n <= 10'000'000, k, "must be between 1 and 10000000");
         s.max_iters = static_cast<int>(n);
       }},
  };
  for (const auto& [k, v] : entries) {
    const auto it = setters.find(k);
    if (it == setters.end()) throw UsageError(k + ": unknown configuration key");
    it->second(c, k, v);
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path, const ScenarioConfig& base) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), base);
}

}  // namespace fracprog::netsim
