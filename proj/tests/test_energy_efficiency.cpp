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

#include <doctest.h>

#include <cmath>

#include "fracprog/energy_efficiency.hpp"
#include "fracprog/fp_core.hpp"
#include "fracprog/rng.hpp"
#include "oracles.hpp"

using namespace fracprog;
using namespace fracprog::ee;
using fracprog::numerics::RngStream;

namespace {

double golden_ee(const SingleLink& link) {
  return oracle::golden_max([&](double p) { return ee_objective(p, link); }, 0.0, link.p_max).value;
}

BroadcastNetwork random_broadcast(std::size_t receivers, std::size_t M, std::size_t N, RngStream& rng) {
  BroadcastNetwork net;
  for (std::size_t m = 0; m < receivers; ++m) {
    CMat H(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(M));
    for (Eigen::Index i = 0; i < H.size(); ++i) H.data()[i] = rng.complex_normal();
    net.channels.push_back(H);
  }
  net.noise = 0.1;
  net.p_max = 1.0;
  net.p_on = 0.2;
  return net;
}

bf::Beamformers equal_power_start(const BroadcastNetwork& net, RngStream& rng) {
  bf::Beamformers V;
  const double amp = std::sqrt(net.p_max / static_cast<double>(net.receivers()));
  for (std::size_t m = 0; m < net.receivers(); ++m) {
    CVec v(static_cast<Eigen::Index>(net.tx_antennas()));
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = rng.complex_normal();
    V.push_back(amp * v / v.norm());
  }
  return V;
}

}  // namespace

TEST_CASE("efficiency examples") {
  const SingleLink link{1.0, 1.0, 10.0, 1.0};
  CHECK(ee_objective(0.0, link) == 0.0);
  CHECK(ee_objective(1.0, link) == doctest::Approx(std::log(2.0) / 2.0));
  BroadcastNetwork net;
  net.channels = {CMat::Ones(1, 2)};
  CHECK(ee_objective(bf::Beamformers{CVec::Zero(2)}, net) == 0.0);
  CHECK_THROWS_AS((SingleLink{1.0, 1.0, 1.0, 0.0}.validate()), DomainError);
}

TEST_CASE("single link: both methods reach the golden-section optimum") {
  const SingleLink link{100.0, 1.0, 10.0, 1.0};
  const double opt = golden_ee(link);
  const auto q = ee_single_link_qt(link, link.p_max, 1e-14, 200);
  const auto d = ee_single_link_dinkelbach(link, link.p_max, 1e-14, 200);
  CHECK(oracle::rel_err(ee_objective(q.p, link), opt) <= 1e-8);
  CHECK(oracle::rel_err(ee_objective(d.p, link), opt) <= 1e-8);
  CHECK(d.trace.iterations() <= q.trace.iterations());
  CHECK(q.trace.nondecreasing(1e-12));
  CHECK(d.trace.nondecreasing(1e-12));
}

TEST_CASE("single link: random instances") {
  RngStream rng(83);
  for (int k = 0; k < 100; ++k) {
    const SingleLink link{rng.uniform(0.1, 100.0), rng.uniform(0.1, 2.0), rng.uniform(0.5, 20.0),
                          rng.uniform(0.05, 5.0)};
    const double opt = golden_ee(link);
    const auto q = ee_single_link_qt(link, link.p_max, 1e-14, 500);
    const auto d = ee_single_link_dinkelbach(link, link.p_max, 1e-14, 500);
    CHECK(oracle::rel_err(ee_objective(q.p, link), opt) <= 1e-8);
    CHECK(oracle::rel_err(ee_objective(d.p, link), opt) <= 1e-8);
  }
}

TEST_CASE("single link limits") {
  const SingleLink dead{0.0, 1.0, 10.0, 1.0};
  CHECK(ee_single_link_qt(dead, 5.0, 1e-12, 50).p == 0.0);
  CHECK(ee_single_link_dinkelbach(dead, 5.0, 1e-12, 50).p == 0.0);
  // A huge ON power makes the efficiency increase over the whole range.
  const SingleLink hungry{100.0, 1.0, 10.0, 1e6};
  CHECK(ee_single_link_qt(hungry, 1.0, 1e-14, 200).p == doctest::Approx(10.0));
  CHECK(ee_single_link_dinkelbach(hungry, 1.0, 1e-14, 200).p == doctest::Approx(10.0));
}

TEST_CASE("inner power steps maximize their surrogates") {
  RngStream rng(89);
  for (int k = 0; k < 50; ++k) {
    const SingleLink link{rng.uniform(0.1, 100.0), 1.0, rng.uniform(0.5, 20.0), rng.uniform(0.05, 5.0)};
    const double a = link.gain / link.noise;
    const double y = rng.uniform(0.01, 2.0);
    const auto qt = oracle::golden_max(
        [&](double p) { return 2.0 * y * std::sqrt(std::log1p(a * p)) - y * y * (p + link.p_on); }, 0.0, link.p_max);
    const double pq = qt_power_step(y, link);
    CHECK(2.0 * y * std::sqrt(std::log1p(a * pq)) - y * y * (pq + link.p_on) >= qt.value - 1e-10);
    const auto dk =
        oracle::golden_max([&](double p) { return std::log1p(a * p) - y * (p + link.p_on); }, 0.0, link.p_max);
    const double pd = dinkelbach_power_step(y, link);
    CHECK(std::log1p(a * pd) - y * (pd + link.p_on) >= dk.value - 1e-10);
  }
}

TEST_CASE("nested transform identities") {
  RngStream rng(97);
  for (int k = 0; k < 50; ++k) {
    const auto net = random_broadcast(3, 3, 2, rng);
    const auto V = equal_power_start(net, rng);
    const auto mimo = net.as_mimo();
    const double rate = bf::weighted_sum_rate(V, mimo);
    double power = net.p_on;
    for (const auto& v : V) power += v.squaredNorm();
    const double y = nested_y(V, net);
    CHECK(oracle::rel_err(y, fp::qt_optimal_y(rate, power)) <= 1e-14);
    const auto Z = bf::direct_y(V, mimo);
    CHECK(oracle::rel_err(nested_surrogate(V, y, Z, net), ee_objective(V, net)) <= 1e-9);
  }
}

TEST_CASE("nested surrogate gradient matches finite differences") {
  RngStream rng(101);
  const auto net = random_broadcast(2, 2, 2, rng);
  const auto mimo = net.as_mimo();
  const auto V = equal_power_start(net, rng);
  const double y = nested_y(V, net);
  const auto Z = bf::direct_y(V, mimo);
  const Vec fd = oracle::central_gradient(
      [&](const Vec& x) { return nested_surrogate(bf::unpack(x, mimo), y, Z, net); }, bf::pack(V), 1e-6);
  const Vec g = 2.0 * bf::pack(nested_surrogate_gradient(V, y, Z, net));
  CHECK((g - fd).norm() <= 1e-5 * (1.0 + fd.norm()));
}

TEST_CASE("nested solver reduces to the single-link problem") {
  BroadcastNetwork net;
  net.channels = {CMat::Constant(1, 1, cplx(3.0, 4.0))};
  net.noise = 1.0;
  net.p_max = 10.0;
  net.p_on = 1.0;
  const SingleLink link{25.0, 1.0, 10.0, 1.0};
  const auto r = ee_nested_solve(net, {CVec::Constant(1, cplx(1.0, 0.0))}, 1e-12, 500);
  CHECK(oracle::rel_err(ee_objective(r.V, net), golden_ee(link)) <= 1e-6);

  // Two transmit antennas: matched filter direction, scalar power on ||h||^2.
  CMat h(1, 2);
  h << cplx(1.0, 1.0), cplx(0.5, -2.0);
  net.channels = {h};
  const SingleLink eq{h.squaredNorm(), 1.0, 10.0, 1.0};
  const auto m = ee_nested_solve(net, {CVec::Constant(2, cplx(0.5, 0.0))}, 1e-12, 500);
  CHECK(oracle::rel_err(ee_objective(m.V, net), golden_ee(eq)) <= 1e-6);
  const CVec dir = h.adjoint().col(0).normalized();
  CHECK(std::abs(std::abs(dir.dot(m.V[0])) - m.V[0].norm()) <= 1e-4 * m.V[0].norm());
}

TEST_CASE("nested solver is monotone and improves on its start") {
  RngStream rng(103);
  for (int k = 0; k < 10; ++k) {
    const auto net = random_broadcast(1 + rng.next_u64() % 3, 1 + rng.next_u64() % 3, 1 + rng.next_u64() % 3, rng);
    const auto V0 = equal_power_start(net, rng);
    const auto r = ee_nested_solve(net, V0, 1e-8, 15);
    CHECK(r.trace.nondecreasing(1e-9));
    CHECK(r.trace.back().objective > r.trace[0].objective);
    double power = 0.0;
    for (const auto& v : r.V) power += v.squaredNorm();
    CHECK(power <= net.p_max * (1.0 + 1e-9));
  }
}

TEST_CASE("broadcast dispatch") {
  RngStream rng(107);
  const auto net = random_broadcast(2, 2, 1, rng);
  const auto V0 = equal_power_start(net, rng);
  CHECK_THROWS_AS(ee_broadcast_solve(net, BroadcastMethod::Dinkelbach, V0, 1e-6, 10), UsageError);
  CHECK_THROWS_AS(ee_nested_solve(net, {CVec::Zero(2), CVec::Zero(2)}, 1e-6, 10), DomainError);
  CHECK(ee_broadcast_solve(net, BroadcastMethod::Nested, V0, 1e-6, 3).trace.iterations() <= 3);
}
