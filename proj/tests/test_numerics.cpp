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

#include <Eigen/Dense>
#include <cmath>

#include "fracprog/numerics.hpp"
#include "fracprog/rng.hpp"
#include "oracles.hpp"

using namespace fracprog;
using namespace fracprog::numerics;

namespace {

CMat random_hpd(Eigen::Index n, double cond, RngStream& rng) {
  CMat Z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) Z(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<CMat> qr(Z);
  const CMat Q = qr.householderQ();
  Vec eig(n);
  for (Eigen::Index i = 0; i < n; ++i)
    eig[i] = std::pow(cond, n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1));
  CMat B = Q * eig.cast<cplx>().asDiagonal() * Q.adjoint();
  return 0.5 * (B + B.adjoint());
}

CVec random_cvec(Eigen::Index n, RngStream& rng) {
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.complex_normal();
  return v;
}

}  // namespace

TEST_CASE("project_box clamps and is idempotent") {
  CHECK(project_box(Vec::Constant(1, 2.0), Vec::Zero(1), Vec::Ones(1))[0] == 1.0);
  CHECK(project_box(Vec::Constant(1, -1.0), Vec::Zero(1), Vec::Ones(1))[0] == 0.0);
  CHECK(project_box(Vec::Constant(1, 0.5), Vec::Zero(1), Vec::Ones(1))[0] == 0.5);
  RngStream rng(11);
  for (int k = 0; k < 1000; ++k) {
    Vec x(3), lo(3), hi(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = rng.uniform(-3, 3);
      lo[i] = rng.uniform(-1, 0);
      hi[i] = rng.uniform(0, 1);
    }
    const Vec p = project_box(x, lo, hi);
    CHECK((project_box(p, lo, hi).array() == p.array()).all());
  }
}

TEST_CASE("project_group_ball rescales only violating groups") {
  CVec v(4);
  v << cplx(2, 0), cplx(0, 0), cplx(0.3, 0.4), cplx(0, 0);
  const Groups groups{{0, 1}, {2, 3}};
  const CVec p = project_group_ball<CVec>(v, groups, {1.0, 1.0});
  CHECK(std::abs(p[0] - cplx(1, 0)) < 1e-15);
  CHECK(p[2] == v[2]);
  CHECK(p[3] == v[3]);

  RngStream rng(5);
  for (int k = 0; k < 1000; ++k) {
    const CVec x = 2.0 * random_cvec(4, rng);
    const CVec a = project_group_ball<CVec>(x, groups, {0.7, 1.3});
    const CVec b = project_group_ball<CVec>(a, groups, {0.7, 1.3});
    CHECK((a - b).norm() <= 1e-15 * (1.0 + a.norm()));
  }
}

TEST_CASE("project_simplex_sum is the Euclidean projection") {
  RngStream rng(9);
  const Groups groups{{0, 1, 2}, {3, 4}};
  const std::vector<double> budgets{1.0, 0.5};
  for (int k = 0; k < 1000; ++k) {
    Vec x(5);
    for (int i = 0; i < 5; ++i) x[i] = rng.uniform(-1, 1.5);
    const Vec p = project_simplex_sum(x, groups, budgets);
    CHECK((p.array() >= 0.0).all());
    CHECK(p.head(3).sum() <= 1.0 + 1e-12);
    CHECK(p.tail(2).sum() <= 0.5 + 1e-12);
    CHECK((project_simplex_sum(p, groups, budgets) - p).norm() <= 1e-15 * (1.0 + p.norm()));
    // Variational inequality against random feasible points.
    for (int j = 0; j < 5; ++j) {
      Vec z(5);
      for (int i = 0; i < 5; ++i) z[i] = rng.uniform(0, 1);
      z.head(3) *= rng.uniform() / std::max(1.0, z.head(3).sum());
      z.tail(2) *= 0.5 * rng.uniform() / std::max(1.0, z.tail(2).sum());
      CHECK((x - p).dot(z - p) <= 1e-12);
    }
  }
}

TEST_CASE("project_nonneg_group_ball") {
  Vec x(3);
  x << -1.0, 3.0, 4.0;
  const Vec p = project_nonneg_group_ball(x, {{0, 1, 2}}, {1.0});
  CHECK(p[0] == 0.0);
  CHECK(p[1] == doctest::Approx(0.6));
  CHECK(p[2] == doctest::Approx(0.8));
}

TEST_CASE("projected_gradient_maximize on simple concave objectives") {
  const Vec lo = Vec::Zero(2), hi = Vec::Ones(2);
  auto box = [&](const Vec& v) { return project_box(v, lo, hi); };
  Vec c(2);
  c << 0.3, 0.6;
  auto res = projected_gradient_maximize<Vec>([&](const Vec& x) { return -(x - c).squaredNorm(); },
                                              [&](const Vec& x) { return Vec(-2.0 * (x - c)); }, box, Vec::Zero(2));
  CHECK((res.x - c).norm() < 1e-8);
  CHECK(res.converged);

  auto lin = projected_gradient_maximize<Vec>([](const Vec& x) { return x.sum(); },
                                              [](const Vec& x) { return Vec(Vec::Ones(x.size())); }, box,
                                              Vec::Constant(2, 0.2));
  CHECK(lin.x[0] == doctest::Approx(1.0));
  CHECK(lin.x[1] == doctest::Approx(1.0));
}

TEST_CASE("projected_gradient_maximize matches the active-set solution of box quadratics") {
  // Separable quadratics: the active-set solution is the clamped unconstrained optimum.
  RngStream rng(21);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = 4;
    Vec d(n), c(n), lo(n), hi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      d[i] = rng.uniform(0.1, 10.0);
      c[i] = rng.uniform(-2, 2);
      lo[i] = rng.uniform(-1, 0);
      hi[i] = rng.uniform(0, 1);
    }
    auto f = [&](const Vec& x) { return -(d.array() * (x - c).array().square()).sum(); };
    auto g = [&](const Vec& x) { return Vec(-2.0 * d.array() * (x - c).array()); };
    auto res = projected_gradient_maximize<Vec>(f, g, [&](const Vec& v) { return project_box(v, lo, hi); },
                                                project_box(Vec::Zero(n), lo, hi));
    const Vec expect = project_box(c, lo, hi);
    CHECK((res.x - expect).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("projected_gradient_maximize objective never decreases") {
  RngStream rng(3);
  std::vector<double> seen;
  Vec c(3);
  c << 2.0, -1.0, 0.5;
  auto f = [&](const Vec& x) {
    const double v = -std::pow((x - c).squaredNorm(), 2) - x.sum();
    seen.push_back(v);
    return v;
  };
  auto g = [&](const Vec& x) { return Vec(-4.0 * (x - c).squaredNorm() * (x - c) - Vec::Ones(3)); };
  SolverOptions opt;
  opt.max_inner_iters = 50;
  auto res = projected_gradient_maximize<Vec>(
      f, g, [](const Vec& v) { return project_box(v, Vec::Constant(3, -1), Vec::Constant(3, 1)); }, Vec::Zero(3),
      opt);
  CHECK(res.value >= seen.front());
}

TEST_CASE("projected_gradient_maximize rejects a non-finite start") {
  Vec x0 = Vec::Constant(1, std::nan(""));
  CHECK_THROWS_AS(projected_gradient_maximize<Vec>([](const Vec& x) { return x.sum(); },
                                                   [](const Vec& x) { return Vec(Vec::Zero(x.size())); },
                                                   [](const Vec& x) { return x; }, x0),
                  DomainError);
}

TEST_CASE("SolverOptions validation") {
  SolverOptions opt;
  opt.armijo_c = 1.0;
  CHECK_THROWS_AS(opt.validate(), UsageError);
  opt = {};
  opt.backtrack_factor = 0.0;
  CHECK_THROWS_AS(opt.validate(), UsageError);
}

TEST_CASE("hpd_solve") {
  CVec a(2);
  a << cplx(2, 0), cplx(0, 2);
  const CVec x = hpd_solve(CMat::Identity(2, 2), a);
  CHECK((x - a).norm() == 0.0);
  CMat D = CMat::Zero(2, 2);
  D(0, 0) = 2.0;
  D(1, 1) = 4.0;
  const CVec y = hpd_solve(D, a);
  CHECK(std::abs(y[0] - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(y[1] - cplx(0, 0.5)) < 1e-15);

  RngStream rng(17);
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.next_u64() % 16);
    const CMat B = random_hpd(n, std::pow(10.0, rng.uniform(0, 6)), rng);
    const CVec b = random_cvec(n, rng);
    const CVec sol = hpd_solve(B, b);
    CHECK((B * sol - b).norm() <= 1e-10 * b.norm());
  }
}

TEST_CASE("hpd_solve errors") {
  CMat B = CMat::Identity(2, 2);
  B(1, 1) = -1.0;
  CHECK_THROWS_AS(hpd_solve(B, CVec::Ones(2)), ConditioningError);
  CHECK_THROWS_AS(hpd_solve(CMat::Identity(2, 2), CVec::Ones(3)), DimensionError);
}

TEST_CASE("bisection_root") {
  CHECK(bisection_root([](double x) { return 1.0 - x; }, 0.0, 2.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bisection_root([](double x) { return -1.0 - x; }, 0.0, 1.0, 1e-12) == 0.0);
  // Bracket grows past the initial upper end.
  CHECK(bisection_root([](double x) { return 1000.0 - x; }, 0.0, 1.0, 1e-9) == doctest::Approx(1000.0));
  CHECK_THROWS_AS(bisection_root([](double) { return 1.0; }, 0.0, 1.0, 1e-9), BracketError);
}

TEST_CASE("RngStream is reproducible and well scaled") {
  RngStream a(42), b(42), c(43);
  bool differs = false;
  for (int k = 0; k < 100; ++k) {
    const double va = a.normal();
    CHECK(va == b.normal());
    differs = differs || va != c.normal();
  }
  CHECK(differs);

  RngStream r(1);
  double m = 0.0, s2 = 0.0, c2 = 0.0, u = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double z = r.normal();
    m += z;
    s2 += z * z;
    c2 += std::norm(r.complex_normal());
    u += r.uniform();
  }
  CHECK(std::abs(m / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
  CHECK(std::abs(c2 / n - 1.0) < 0.02);
  CHECK(std::abs(u / n - 0.5) < 0.01);

  RngStream s1 = r.split(3), s2b = r.split(3), s4 = r.split(4);
  CHECK(s1.next_u64() == s2b.next_u64());
  CHECK(s1.next_u64() != s4.next_u64());
}
