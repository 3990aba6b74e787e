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

#include "fracprog/energy_efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracprog::ee {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double total_power(const bf::Beamformers& V) {
  double p = 0.0;
  for (const auto& v : V) p += v.squaredNorm();
  return p;
}

void check_start(const bf::Beamformers& V, const BroadcastNetwork& net) {
  if (V.size() != net.receivers()) throw DimensionError("ee_nested_solve: one beamformer per receiver");
  for (const auto& v : V)
    if (static_cast<std::size_t>(v.size()) != net.tx_antennas())
      throw DimensionError("ee_nested_solve: beamformer length must equal the antenna count");
  const double p = total_power(V);
  if (p > net.p_max * (1.0 + 1e-12)) throw DomainError("ee_nested_solve: V0 violates the power budget");
  if (p == 0.0) throw DomainError("ee_nested_solve: V0 must not be all zero");
}

}  // namespace

void SingleLink::validate() const {
  if (!(gain >= 0.0) || !std::isfinite(gain)) throw DomainError("SingleLink: gain must be >= 0");
  if (!(noise > 0.0) || !(p_max > 0.0) || !(p_on > 0.0))
    throw DomainError("SingleLink: noise, p_max and p_on must be positive");
}

void BroadcastNetwork::validate() const {
  if (channels.empty()) throw DimensionError("BroadcastNetwork: at least one receiver");
  const auto N = channels.front().rows();
  const auto M = channels.front().cols();
  if (N == 0 || M == 0) throw DimensionError("BroadcastNetwork: empty channel");
  for (const auto& H : channels)
    if (H.rows() != N || H.cols() != M) throw DimensionError("BroadcastNetwork: channels must share dimensions");
  if (!(noise > 0.0) || !(p_max > 0.0) || !(p_on > 0.0))
    throw DomainError("BroadcastNetwork: noise, p_max and p_on must be positive");
}

bf::MimoNetwork BroadcastNetwork::as_mimo() const {
  validate();
  bf::MimoNetwork net;
  net.cells = 1;
  net.streams_per_cell = receivers();
  net.tx_antennas = tx_antennas();
  net.rx_antennas = static_cast<std::size_t>(channels.front().rows());
  for (const auto& H : channels) net.channels.push_back({H});
  net.weights = Vec::Ones(static_cast<Eigen::Index>(receivers()));
  net.noise = noise;
  net.p_max = p_max;
  return net;
}

// ---------------------------------------------------------------------------

double ee_objective(double p, const SingleLink& link) {
  return std::log1p(link.gain * p / link.noise) / (p + link.p_on);
}

double ee_objective(const bf::Beamformers& V, const BroadcastNetwork& net) {
  return bf::stream_rates(V, net.as_mimo()).sum() / (total_power(V) + net.p_on);
}

double qt_power_step(double y, const SingleLink& link) {
  const double a = link.gain / link.noise;
  if (a == 0.0 || y <= 0.0) return 0.0;
  // Derivative of the concave inner objective; +inf at p = 0.
  auto slope = [&](double p) {
    const double R = std::log1p(a * p);
    if (R <= 0.0) return std::numeric_limits<double>::infinity();
    return y * (a / (1.0 + a * p)) / std::sqrt(R) - y * y;
  };
  if (slope(link.p_max) >= 0.0) return link.p_max;
  return numerics::bisection_root(slope, 0.0, link.p_max, 1e-16 * link.p_max);
}

double dinkelbach_power_step(double y, const SingleLink& link) {
  const double a = link.gain / link.noise;
  if (a == 0.0) return 0.0;
  if (y <= 0.0) return link.p_max;
  return std::clamp(1.0 / y - 1.0 / a, 0.0, link.p_max);
}

namespace {
template <class Step, class Aux>
SingleLinkResult single_link_loop(const SingleLink& link, double p0, double tol, int max_iters, Aux aux, Step step) {
  link.validate();
  if (!(p0 >= 0.0 && p0 <= link.p_max)) throw DomainError("energy efficiency: p0 must lie in [0, p_max]");
  if (!(tol > 0.0) || max_iters <= 0) throw UsageError("energy efficiency: tol and max_iters must be positive");
  SingleLinkResult out;
  out.p = p0;
  double f = ee_objective(out.p, link);
  out.trace.record(f, 0.0);
  for (int it = 0; it < max_iters; ++it) {
    out.y = aux(out.p);
    const double p_next = step(out.y);
    const double f_next = ee_objective(p_next, link);
    out.trace.record(f_next, std::abs(p_next - out.p));
    out.p = p_next;
    const bool done = objective_settled(f, f_next, tol);
    f = f_next;
    if (done) {
      out.converged = true;
      break;
    }
  }
  return out;
}
}  // namespace

SingleLinkResult ee_single_link_qt(const SingleLink& link, double p0, double tol, int max_iters) {
  return single_link_loop(
      link, p0, tol, max_iters,
      [&](double p) { return std::sqrt(std::log1p(link.gain * p / link.noise)) / (p + link.p_on); },
      [&](double y) { return qt_power_step(y, link); });
}

SingleLinkResult ee_single_link_dinkelbach(const SingleLink& link, double p0, double tol, int max_iters) {
  return single_link_loop(
      link, p0, tol, max_iters, [&](double p) { return ee_objective(p, link); },
      [&](double y) { return dinkelbach_power_step(y, link); });
}

// ---------------------------------------------------------------------------

double nested_y(const bf::Beamformers& V, const BroadcastNetwork& net) {
  return std::sqrt(bf::stream_rates(V, net.as_mimo()).sum()) / (total_power(V) + net.p_on);
}

double nested_surrogate(const bf::Beamformers& V, double y, const std::vector<CVec>& Z, const BroadcastNetwork& net) {
  const double S = bf::direct_surrogate(V, Z, net.as_mimo());
  if (!(S > 0.0)) return kNegInf;
  return 2.0 * y * std::sqrt(S) - y * y * (total_power(V) + net.p_on);
}

bf::Beamformers nested_surrogate_gradient(const bf::Beamformers& V, double y, const std::vector<CVec>& Z,
                                          const BroadcastNetwork& net) {
  const auto mimo = net.as_mimo();
  const double S = bf::direct_surrogate(V, Z, mimo);
  if (!(S > 0.0)) throw DomainError("nested_surrogate_gradient: rate sum must be positive");
  auto G = bf::direct_surrogate_gradient(V, Z, mimo);
  for (std::size_t m = 0; m < G.size(); ++m) G[m] = y / std::sqrt(S) * G[m] - y * y * V[m];
  return G;
}

double ee_residual(const bf::Beamformers& V, const BroadcastNetwork& net) {
  const auto mimo = net.as_mimo();
  const auto Z = bf::direct_y(V, mimo);
  const double S = bf::stream_rates(V, mimo).sum();
  const double D = total_power(V) + net.p_on;
  auto dS = bf::direct_surrogate_gradient(V, Z, mimo);
  for (std::size_t m = 0; m < dS.size(); ++m) dS[m] = (dS[m] * D - S * V[m]) / (D * D);
  const Vec x = bf::pack(V);
  const Vec g = 2.0 * bf::pack(dS);
  const Vec moved = x + g;
  const double nrm = moved.norm();
  const double r = std::sqrt(net.p_max);
  return (x - (nrm > r ? Vec(moved * (r / nrm)) : moved)).norm();
}

BroadcastResult ee_nested_solve(const BroadcastNetwork& net, const bf::Beamformers& V0, double tol, int max_iters,
                                const numerics::SolverOptions& inner) {
  net.validate();
  check_start(V0, net);
  if (!(tol > 0.0) || max_iters <= 0) throw UsageError("ee_nested_solve: tol and max_iters must be positive");
  inner.validate();
  const auto mimo = net.as_mimo();
  const double radius = std::sqrt(net.p_max);

  BroadcastResult out;
  out.V = V0;
  double f = ee_objective(out.V, net);
  out.residual = ee_residual(out.V, net);
  out.trace.record(f, out.residual);
  for (int it = 0; it < max_iters; ++it) {
    out.z = bf::direct_y(out.V, mimo);
    out.y = nested_y(out.V, net);
    const auto& Z = out.z;
    const double y = out.y;
    auto value = [&](const Vec& x) { return nested_surrogate(bf::unpack(x, mimo), y, Z, net); };
    auto gradient = [&](const Vec& x) {
      return Vec(2.0 * bf::pack(nested_surrogate_gradient(bf::unpack(x, mimo), y, Z, net)));
    };
    auto project = [&](const Vec& x) {
      const double nrm = x.norm();
      return nrm > radius ? Vec(x * (radius / nrm)) : x;
    };
    const auto res = numerics::projected_gradient_maximize<Vec>(value, gradient, project, bf::pack(out.V), inner);
    out.V = bf::unpack(res.x, mimo);
    const double f_new = ee_objective(out.V, net);
    out.residual = ee_residual(out.V, net);
    out.trace.record(f_new, out.residual);
    const bool done = objective_settled(f, f_new, tol) && out.residual <= 10.0 * tol;
    f = f_new;
    if (done) {
      out.converged = true;
      break;
    }
  }
  return out;
}

BroadcastResult ee_broadcast_solve(const BroadcastNetwork& net, BroadcastMethod method, const bf::Beamformers& V0,
                                   double tol, int max_iters) {
  if (method == BroadcastMethod::Dinkelbach)
    throw UsageError(
        "dinkelbach is not offered for the multi-receiver case: rates minus y times power is not concave in the "
        "beamformers, so the inner step cannot be solved reliably; use nested");
  return ee_nested_solve(net, V0, tol, max_iters);
}

}  // namespace fracprog::ee
