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

#include "fracprog/netsim/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "fracprog/netsim/units.hpp"

namespace fracprog::netsim {

namespace {

Eigen::Index ei(std::size_t i) { return static_cast<Eigen::Index>(i); }

Point polar(double r, double deg) {
  const double a = deg * std::numbers::pi / 180.0;
  return {r * std::cos(a), r * std::sin(a)};
}

class Fnv {
 public:
  void add(const std::string& s) {
    for (unsigned char c : s) {
      h_ ^= c;
      h_ *= 0x100000001b3ULL;
    }
  }
  void add(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g;", v);
    add(std::string(buf));
  }
  void add(const Mat& m) {
    add(std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ":");
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) add(m(i, j));
  }
  void add(const CMat& m) {
    add(Mat(m.real()));
    add(Mat(m.imag()));
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

CMat rayleigh(Eigen::Index rows, Eigen::Index cols, double gain, numerics::RngStream& rng) {
  const double amp = std::sqrt(gain);
  CMat H(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) H(i, j) = amp * rng.complex_normal();
  return H;
}

}  // namespace

HexLayout::HexLayout(double isd_km) : isd_(isd_km) {
  if (!(isd_km > 0.0)) throw DomainError("HexLayout: inter-site distance must be positive");
  sites_[0] = Point::Zero();
  for (int k = 0; k < 6; ++k) sites_[static_cast<std::size_t>(k) + 1] = polar(isd_km, 60.0 * k);
  // 2 u1 + u2 spans the seven-cell cluster; its six rotations tile the plane.
  const Point u1 = polar(isd_km, 0.0);
  const Point u2 = polar(isd_km, 60.0);
  const Point base = 2.0 * u1 + u2;
  const double len = base.norm();
  const double ang = std::atan2(base.y(), base.x()) * 180.0 / std::numbers::pi;
  for (int k = 0; k < 6; ++k) shifts_[static_cast<std::size_t>(k)] = polar(len, ang + 60.0 * k);
}

bool HexLayout::in_hexagon(const Point& offset) const {
  const double half = 0.5 * isd_;
  for (double deg : {0.0, 60.0, 120.0}) {
    const Point n = polar(1.0, deg);
    if (std::abs(offset.dot(n)) > half) return false;
  }
  return true;
}

Point HexLayout::sample_in_cell(std::size_t cell, numerics::RngStream& rng) const {
  if (cell >= sites_.size()) throw DimensionError("HexLayout: cell index out of range");
  const double r = isd_ / std::sqrt(3.0);
  for (;;) {
    const Point offset(rng.uniform(-r, r), rng.uniform(-r, r));
    if (in_hexagon(offset)) return sites_[cell] + offset;
  }
}

double HexLayout::wrap_distance(const Point& user, std::size_t bs) const {
  if (bs >= sites_.size()) throw DimensionError("HexLayout: BS index out of range");
  double d = (user - sites_[bs]).norm();
  for (const auto& s : shifts_) d = std::min(d, (user - sites_[bs] - s).norm());
  return std::max(d, kMinDistanceKm);
}

Placement place_users(const HexLayout& layout, std::size_t users_per_cell, numerics::RngStream& rng) {
  Placement pl;
  pl.users_per_cell = users_per_cell;
  for (std::size_t i = 0; i < layout.sites().size(); ++i)
    for (std::size_t u = 0; u < users_per_cell; ++u) pl.users.push_back(layout.sample_in_cell(i, rng));
  return pl;
}

Mat large_scale_gains(const HexLayout& layout, const Placement& placement, double shadowing_db_std,
                      numerics::RngStream& rng) {
  const std::size_t B = layout.sites().size();
  Mat G(ei(placement.users.size()), ei(B));
  for (std::size_t k = 0; k < placement.users.size(); ++k)
    for (std::size_t j = 0; j < B; ++j) {
      const double shadow = shadowing_db_std > 0.0 ? rng.normal(0.0, shadowing_db_std) : 0.0;
      G(ei(k), ei(j)) = db_to_linear(-pathloss_db(layout.wrap_distance(placement.users[k], j), shadow));
    }
  return G;
}

pc::SisoNetwork generate_siso_hex(const ScenarioConfig& cfg, numerics::RngStream& rng) {
  if (cfg.kind != ScenarioKind::SisoHex) throw UsageError("generate_siso_hex: scenario kind must be siso_hex");
  cfg.validate();
  const HexLayout layout(cfg.isd_km);
  const Placement pl = place_users(layout, cfg.users_per_cell, rng);
  const Mat user_gain = large_scale_gains(layout, pl, cfg.shadowing_db_std, rng);
  const std::size_t B = layout.sites().size();

  pc::SisoNetwork net;
  net.weights = Vec::Ones(ei(B));
  net.noise = dbm_to_watt(cfg.noise_dbm);
  net.p_max = dbm_to_watt(cfg.p_max_dbm);
  // Band t of cell i serves user (t mod users_per_cell).
  for (std::size_t t = 0; t < cfg.bands; ++t) {
    Mat G(ei(B), ei(B));
    for (std::size_t i = 0; i < B; ++i) G.row(ei(i)) = user_gain.row(ei(i * cfg.users_per_cell + t % cfg.users_per_cell));
    net.gains.push_back(std::move(G));
  }
  net.validate();
  return net;
}

bf::MimoNetwork generate_mimo_hex(const ScenarioConfig& cfg, numerics::RngStream& rng) {
  if (cfg.kind != ScenarioKind::MimoHex) throw UsageError("generate_mimo_hex: scenario kind must be mimo_hex");
  cfg.validate();
  const HexLayout layout(cfg.isd_km);
  const Placement pl = place_users(layout, cfg.users_per_cell, rng);
  const Mat user_gain = large_scale_gains(layout, pl, cfg.shadowing_db_std, rng);

  bf::MimoNetwork net;
  net.cells = layout.sites().size();
  net.streams_per_cell = cfg.users_per_cell;
  net.tx_antennas = cfg.bs_antennas;
  net.rx_antennas = cfg.user_antennas;
  net.weights = Vec::Ones(ei(net.streams()));
  net.noise = dbm_to_watt(cfg.noise_dbm);
  net.p_max = dbm_to_watt(cfg.p_max_dbm);
  net.channels.resize(net.streams());
  for (std::size_t s = 0; s < net.streams(); ++s)
    for (std::size_t j = 0; j < net.cells; ++j)
      net.channels[s].push_back(
          rayleigh(ei(net.rx_antennas), ei(net.tx_antennas), user_gain(ei(s), ei(j)), rng));
  net.validate();
  return net;
}

ee::SingleLink generate_ee_single(const ScenarioConfig& cfg) {
  if (cfg.kind != ScenarioKind::EeSingle) throw UsageError("generate_ee_single: scenario kind must be ee_single");
  cfg.validate();
  ee::SingleLink link;
  link.gain = db_to_linear(-cfg.pathloss_db);
  link.noise = dbm_to_watt(cfg.noise_dbm);
  link.p_max = dbm_to_watt(cfg.p_max_dbm);
  link.p_on = dbm_to_watt(cfg.p_on_dbm);
  link.validate();
  return link;
}

ee::BroadcastNetwork generate_ee_broadcast(const ScenarioConfig& cfg, numerics::RngStream& rng) {
  if (cfg.kind != ScenarioKind::EeBroadcast)
    throw UsageError("generate_ee_broadcast: scenario kind must be ee_broadcast");
  cfg.validate();
  ee::BroadcastNetwork net;
  net.noise = dbm_to_watt(cfg.noise_dbm);
  net.p_max = dbm_to_watt(cfg.p_max_dbm);
  net.p_on = dbm_to_watt(cfg.p_on_dbm);
  const double gain = db_to_linear(-cfg.pathloss_db);
  for (std::size_t m = 0; m < cfg.users_per_cell; ++m)
    net.channels.push_back(rayleigh(ei(cfg.user_antennas), ei(cfg.bs_antennas), gain, rng));
  net.validate();
  return net;
}

std::uint64_t instance_hash(const pc::SisoNetwork& net) {
  Fnv h;
  h.add("siso;");
  for (const auto& G : net.gains) h.add(G);
  h.add(Mat(net.weights));
  h.add(net.noise);
  h.add(net.p_max);
  return h.value();
}

std::uint64_t instance_hash(const bf::MimoNetwork& net) {
  Fnv h;
  h.add("mimo;" + std::to_string(net.cells) + ";" + std::to_string(net.streams_per_cell) + ";");
  for (const auto& row : net.channels)
    for (const auto& H : row) h.add(H);
  h.add(Mat(net.weights));
  h.add(net.noise);
  h.add(net.p_max);
  return h.value();
}

std::uint64_t instance_hash(const ee::SingleLink& link) {
  Fnv h;
  h.add("link;");
  h.add(link.gain);
  h.add(link.noise);
  h.add(link.p_max);
  h.add(link.p_on);
  return h.value();
}

std::uint64_t instance_hash(const ee::BroadcastNetwork& net) {
  Fnv h;
  h.add("broadcast;");
  for (const auto& H : net.channels) h.add(H);
  h.add(net.noise);
  h.add(net.p_max);
  h.add(net.p_on);
  return h.value();
}

}  // namespace fracprog::netsim
