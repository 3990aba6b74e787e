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

#include "fracprog/netsim/units.hpp"

#include <cmath>
#include <numbers>

#include "fracprog/types.hpp"

namespace fracprog::netsim {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) {
  if (!(watt > 0.0)) throw DomainError("watt_to_dbm: power must be positive");
  return 10.0 * std::log10(watt) + 30.0;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) {
  if (!(linear > 0.0)) throw DomainError("linear_to_db: value must be positive");
  return 10.0 * std::log10(linear);
}

double pathloss_db(double d_km, double shadow_db) {
  if (!(d_km > 0.0)) throw DomainError("pathloss_db: distance must be positive");
  return 128.1 + 37.6 * std::log10(d_km) + shadow_db;
}

double nats_to_mbps(double nats, double bandwidth_hz) { return nats / std::numbers::ln2 * bandwidth_hz / 1e6; }

}  // namespace fracprog::netsim
