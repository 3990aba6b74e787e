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

namespace fracprog::netsim {

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);
double db_to_linear(double db);
double linear_to_db(double linear);

/// 128.1 + 37.6 log10(d_km) + shadow_db. Throws DomainError for d_km <= 0.
double pathloss_db(double d_km, double shadow_db);

/// Nats per channel use to Mbit/s over `bandwidth_hz`.
double nats_to_mbps(double nats, double bandwidth_hz);

}  // namespace fracprog::netsim
