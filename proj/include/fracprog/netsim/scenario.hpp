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

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <vector>

#include "fracprog/beamforming.hpp"
#include "fracprog/energy_efficiency.hpp"
#include "fracprog/netsim/config.hpp"
#include "fracprog/power_control.hpp"
#include "fracprog/rng.hpp"

namespace fracprog::netsim {

using Point = Eigen::Vector2d;

/// Minimum BS-user distance in km.
inline constexpr double kMinDistanceKm = 0.01;

/// Seven hexagonal cells, wrapped onto a torus. Sites sit at the origin and
/// at distance `isd` in directions 0, 60, ..., 300 degrees.
class HexLayout {
 public:
  explicit HexLayout(double isd_km);

  double isd() const { return isd_; }
  const std::array<Point, 7>& sites() const { return sites_; }
  /// Translations mapping the cluster onto its six neighbouring copies.
  const std::array<Point, 6>& cluster_shifts() const { return shifts_; }

  /// Whether `offset` from a site lies in that site's hexagon.
  bool in_hexagon(const Point& offset) const;
  /// Uniform point in cell `cell` by rejection from the bounding box.
  Point sample_in_cell(std::size_t cell, numerics::RngStream& rng) const;
  /// Shortest distance over the wrapped copies of BS `bs`, floored at kMinDistanceKm.
  double wrap_distance(const Point& user, std::size_t bs) const;

 private:
  double isd_;
  std::array<Point, 7> sites_;
  std::array<Point, 6> shifts_;
};

/// Positions of the users, cell-major: user u of cell i at index i * users + u.
struct Placement {
  std::vector<Point> users;
  std::size_t users_per_cell = 0;
};
Placement place_users(const HexLayout& layout, std::size_t users_per_cell, numerics::RngStream& rng);

/// Linear channel power gain from every BS to every user (users x 7), with
/// one independent shadowing draw per pair.
Mat large_scale_gains(const HexLayout& layout, const Placement& placement, double shadowing_db_std,
                      numerics::RngStream& rng);

pc::SisoNetwork generate_siso_hex(const ScenarioConfig& cfg, numerics::RngStream& rng);
bf::MimoNetwork generate_mimo_hex(const ScenarioConfig& cfg, numerics::RngStream& rng);
ee::SingleLink generate_ee_single(const ScenarioConfig& cfg);
ee::BroadcastNetwork generate_ee_broadcast(const ScenarioConfig& cfg, numerics::RngStream& rng);

/// FNV-1a over a full-precision text serialization.
std::uint64_t instance_hash(const pc::SisoNetwork& net);
std::uint64_t instance_hash(const bf::MimoNetwork& net);
std::uint64_t instance_hash(const ee::SingleLink& link);
std::uint64_t instance_hash(const ee::BroadcastNetwork& net);

}  // namespace fracprog::netsim
