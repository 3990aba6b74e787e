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

#include "fracprog/power_control.hpp"
#include "fracprog/rng.hpp"
#include "oracles.hpp"

using namespace fracprog;
using namespace fracprog::pc;
using fracprog::numerics::RngStream;

namespace {

SisoNetwork two_cell(double cross) {
  Mat G(2, 2);
  G << 1.0, cross, cross, 1.0;
  return SisoNetwork::single_band(G, Vec::Ones(2), 1.0, 10.0);
}

SisoNetwork random_network(std::size_t n, RngStream& rng) {
  Mat G(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < G.rows(); ++i)
    for (Eigen::Index j = 0; j < G.cols(); ++j) G(i, j) = i == j ? rng.uniform(0.5, 2.0) : rng.uniform(0.0, 0.5);
  Vec w(G.rows());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = rng.uniform(0.5, 1.5);
  return SisoNetwork::single_band(G, w, rng.uniform(0.05, 0.5), rng.uniform(1.0, 10.0));
}

Vec random_power(const SisoNetwork& net, RngStream& rng) {
  Vec p(static_cast<Eigen::Index>(net.links()));
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = rng.uniform(0.05, 1.0) * net.p_max;
  return p;
}

double best_of_starts(const SisoNetwork& net, bool closed, int starts, std::uint64_t seed) {
  RngStream rng(seed);
  double best = -INFINITY;
  for (int k = 0; k < starts; ++k) {
    const Vec p0 = random_power(net, rng);
    const auto r = closed ? pc_closed_form_solve(net, p0, 1e-10, 2000) : pc_direct_solve(net, p0, 1e-10, 2000);
    best = std::max(best, weighted_sum_rate(r.p, net));
  }
  return best;
}

}  // namespace

TEST_CASE("sinr and weighted sum rate examples") {
  Mat G(2, 2);
  G << 1.0, 0.5, 0.5, 1.0;
  const Vec s = sinr(Vec::Ones(2), G, 1.0);
  CHECK(s[0] == doctest::Approx(1.0 / 1.5));
  CHECK(s[1] == doctest::Approx(1.0 / 1.5));
  const auto net = SisoNetwork::single_band(G, Vec::Ones(2), 1.0, 1.0);
  CHECK(weighted_sum_rate(Vec(Vec::Ones(2)), net) == doctest::Approx(2.0 * std::log(1.0 + 2.0 / 3.0)));
  CHECK(weighted_sum_rate(Vec(Vec::Zero(2)), net) == 0.0);
  CHECK_THROWS_AS(sinr(Vec::Ones(3), G, 1.0), DimensionError);
  CHECK_THROWS_AS(sinr(Vec::Ones(2), G, 0.0), DomainError);
}

TEST_CASE("network validation") {
  Mat G = Mat::Ones(2, 2);
  CHECK_THROWS_AS(SisoNetwork::single_band(G, Vec::Ones(3), 1.0, 1.0), DimensionError);
  CHECK_THROWS_AS(SisoNetwork::single_band(G, Vec::Ones(2), 1.0, 0.0), DomainError);
  G(0, 1) = -1.0;
  CHECK_THROWS_AS(SisoNetwork::single_band(G, Vec::Ones(2), 1.0, 1.0), DomainError);
}

TEST_CASE("two-cell fixtures match an exhaustive grid") {
  for (double cross : {1.0, 4.0}) {
    CAPTURE(cross);
    const auto net = two_cell(cross);
    const auto grid = oracle::grid_max([&](const Vec& p) { return weighted_sum_rate(p, net); }, Vec::Zero(2),
                                       Vec::Constant(2, net.p_max), 0.01 * net.p_max);
    const double direct = best_of_starts(net, false, 10, 3);
    const double closed = best_of_starts(net, true, 10, 3);
    CHECK(direct >= grid.value - 1e-6);
    CHECK(closed >= grid.value - 1e-6);
  }
  // Cross gain 1: both links at full power is optimal, 2 ln(1 + 10/11).
  const auto r = pc_closed_form_solve(two_cell(1.0), Vec::Constant(2, 5.0), 1e-12, 2000);
  CHECK(weighted_sum_rate(r.p, two_cell(1.0)) == doctest::Approx(2.0 * std::log(1.0 + 10.0 / 11.0)).epsilon(1e-9));
}

TEST_CASE("a single link transmits at full power") {
  const auto net = SisoNetwork::single_band(Mat::Constant(1, 1, 2.0), Vec::Ones(1), 0.5, 3.0);
  for (const auto& r : {pc_direct_solve(net, Vec::Constant(1, 0.1), 1e-10, 200),
                        pc_closed_form_solve(net, Vec::Constant(1, 0.1), 1e-10, 200),
                        pc_fixed_point_solve(net, Vec::Constant(1, 0.1), 200)}) {
    CHECK(r.p[0] == doctest::Approx(3.0).epsilon(1e-6));
  }
}

TEST_CASE("fixed point converges under weak interference") {
  Mat G(3, 3);
  G << 1.0, 0.01, 0.02, 0.015, 1.2, 0.01, 0.01, 0.02, 0.9;
  const auto net = SisoNetwork::single_band(G, Vec::Ones(3), 0.1, 1.0);
  const auto r = pc_fixed_point_solve(net, default_start(net), 500);
  CHECK(r.converged);
  CHECK(foc_residual(r.p, net) <= 1e-6);
}

TEST_CASE("foc residual vanishes at a box corner optimum and not elsewhere") {
  const auto net = two_cell(0.1);
  CHECK(foc_residual(Vec::Constant(2, net.p_max), net) <= 1e-12);
  CHECK(foc_residual(Vec::Constant(2, 1.0), net) > 1e-3);
}

TEST_CASE("gradients match finite differences") {
  RngStream rng(17);
  for (int k = 0; k < 20; ++k) {
    const auto net = random_network(4, rng);
    const Vec p = random_power(net, rng);
    const Vec fd = oracle::central_gradient([&](const Vec& q) { return weighted_sum_rate(q, net); }, p, 1e-6);
    CHECK((rate_gradient(p, net) - fd).norm() <= 1e-6 * (1.0 + fd.norm()));

    const Vec y = direct_y(p, net);
    const Vec fs = oracle::central_gradient([&](const Vec& q) { return direct_surrogate(q, y, net); }, p, 1e-6);
    CHECK((direct_surrogate_gradient(p, y, net) - fs).norm() <= 1e-5 * (1.0 + fs.norm()));

    const std::vector<Utility> logs(4, log_utility(1e-6));
    const Vec fu = oracle::central_gradient(
        [&](const Vec& q) { return utility_objective(Mat(q), net, logs); }, p, 1e-6);
    CHECK((Vec(utility_gradient(Mat(p), net, logs)) - fu).norm() <= 1e-5 * (1.0 + fu.norm()));
  }
}

TEST_CASE("direct surrogate is tight at the optimal auxiliaries") {
  RngStream rng(23);
  for (int k = 0; k < 50; ++k) {
    const auto net = random_network(5, rng);
    const Vec p = random_power(net, rng);
    const Vec y = direct_y(p, net);
    CHECK(oracle::rel_err(direct_surrogate(p, y, net), weighted_sum_rate(p, net)) <= 1e-10);
    Vec y2 = y;
    y2[0] *= 1.3;
    CHECK(direct_surrogate(p, y2, net) <= weighted_sum_rate(p, net) + 1e-12);
  }
}

TEST_CASE("closed-form iteration: gamma identity and the fixed-point ratio form") {
  RngStream rng(29);
  for (int k = 0; k < 50; ++k) {
    const auto net = random_network(4, rng);
    const Vec p = random_power(net, rng);
    const Vec gamma = sinr(p, net);
    const Vec y = closed_form_y(p, gamma, net);
    const Vec raw = closed_form_power_raw(y, gamma, net);
    const Vec ratio = fixed_point_ratio_form(p, gamma, net);
    for (Eigen::Index i = 0; i < p.size(); ++i) CHECK(oracle::rel_err(raw[i], ratio[i]) <= 1e-10);
  }
  const auto net = two_cell(0.3);
  const auto r = pc_closed_form_solve(net, Vec::Constant(2, 1.0), 1e-12, 2000);
  CHECK((r.gamma - sinr(r.p, net)).norm() <= 1e-6 * r.gamma.norm());
}

TEST_CASE("monotone objective on random four-cell networks") {
  RngStream rng(31);
  for (int k = 0; k < 100; ++k) {
    const auto net = random_network(4, rng);
    const Vec p0 = random_power(net, rng);
    const auto d = pc_direct_solve(net, p0, 1e-8, 300);
    const auto c = pc_closed_form_solve(net, p0, 1e-8, 300);
    CHECK(d.trace.nondecreasing(1e-9));
    CHECK(c.trace.nondecreasing(1e-9));
    CHECK(((d.p.array() >= 0.0) && (d.p.array() <= net.p_max)).all());
    CHECK(((c.p.array() >= 0.0) && (c.p.array() <= net.p_max)).all());
  }
}

TEST_CASE("multiband allocation") {
  SUBCASE("identical bands split the budget evenly") {
    Mat G = Mat::Constant(1, 1, 1.0);
    SisoNetwork net;
    net.gains = {G, G};
    net.weights = Vec::Ones(1);
    net.noise = 1.0;
    net.p_max = 4.0;
    const auto r = pc_multiband_solve(net, Mat::Constant(1, 2, 0.5), 1e-10, 500);
    CHECK(r.p(0, 0) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(r.p(0, 1) == doctest::Approx(2.0).epsilon(1e-5));
  }
  SUBCASE("a dead band gets no power") {
    SisoNetwork net;
    net.gains = {Mat::Constant(1, 1, 1.0), Mat::Constant(1, 1, 1e-9)};
    net.weights = Vec::Ones(1);
    net.noise = 1.0;
    net.p_max = 1.0;
    const auto r = pc_multiband_solve(net, Mat::Constant(1, 2, 0.4), 1e-10, 500);
    CHECK(r.p(0, 1) <= 1e-6);
    CHECK(r.p(0, 0) == doctest::Approx(1.0).epsilon(1e-5));
  }
  SUBCASE("two links on two bands against a grid") {
    SisoNetwork net;
    Mat G1(2, 2), G2(2, 2);
    G1 << 1.0, 0.6, 0.2, 0.5;
    G2 << 0.4, 0.1, 0.7, 1.0;
    net.gains = {G1, G2};
    net.weights = Vec::Ones(2);
    net.noise = 0.1;
    net.p_max = 1.0;
    // Coordinates: (p_11, p_21); link budgets are tight at the optimum so p_i2 = pmax - p_i1.
    auto f = [&](const Vec& v) {
      Mat P(2, 2);
      P << v[0], net.p_max - v[0], v[1], net.p_max - v[1];
      return weighted_sum_rate(P, net);
    };
    const auto grid = oracle::grid_max(f, Vec::Zero(2), Vec::Constant(2, net.p_max), 0.05 * net.p_max);
    double best = -INFINITY;
    RngStream rng(5);
    for (int k = 0; k < 10; ++k) {
      Mat P0(2, 2);
      for (Eigen::Index i = 0; i < 4; ++i) P0.data()[i] = rng.uniform(0.05, 0.5);
      const auto r = pc_multiband_solve(net, P0, 1e-10, 2000);
      CHECK(r.trace.nondecreasing(1e-9));
      CHECK((r.p.rowwise().sum().array() <= net.p_max * (1.0 + 1e-12)).all());
      best = std::max(best, weighted_sum_rate(r.p, net));
    }
    CHECK(best >= grid.value - 1e-6);
  }
}

TEST_CASE("utility maximization") {
  RngStream rng(37);
  const auto net = random_network(3, rng);
  const Vec p0 = default_start(net);
  const std::vector<Utility> ids(3, identity_utility());
  const auto u = pc_utility_solve(net, ids, p0, 1e-10, 1000);
  const auto d = pc_direct_solve(net, p0, 1e-10, 1000);
  CHECK(weighted_sum_rate(u.p, net) == doctest::Approx(weighted_sum_rate(d.p, net)).epsilon(1e-6));

  // Proportional fairness on a symmetric network gives equal rates.
  Mat G(2, 2);
  G << 1.0, 0.8, 0.8, 1.0;
  const auto sym = SisoNetwork::single_band(G, Vec::Ones(2), 0.1, 1.0);
  const std::vector<Utility> logs(2, log_utility(1e-6));
  const auto f = pc_utility_solve(sym, logs, Vec::Constant(2, 0.5), 1e-10, 1000);
  CHECK(f.trace.nondecreasing(1e-9));
  const Vec rates = link_rates(Mat(f.p), sym);
  CHECK(rates[0] == doctest::Approx(rates[1]).epsilon(1e-4));
}

TEST_CASE("max-min SINR on an asymmetric pair") {
  Mat G(2, 2);
  G << 1.0, 0.5, 0.3, 4.0;
  const auto net = SisoNetwork::single_band(G, Vec::Ones(2), 1.0, 1.0);
  const auto grid = oracle::grid_max([&](const Vec& p) { return sinr(p, net).minCoeff(); }, Vec::Zero(2),
                                     Vec::Ones(2), 1e-2);
  const auto r = pc_maxmin_solve(net, Vec::Constant(2, 0.5), 1e-10, 2000);
  CHECK(r.trace.nondecreasing(1e-9));
  CHECK(std::abs(sinr(r.p, net).minCoeff() - grid.value) <= 1e-4);
}
