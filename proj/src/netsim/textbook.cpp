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

#include "fracprog/netsim/textbook.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>

namespace fracprog::netsim {

namespace {

using Real = boost::multiprecision::cpp_bin_float_50;

template <class T>
std::vector<RateRow> rows_from(const std::vector<T>& ys) {
  std::vector<RateRow> rows;
  const T half = T(1) / 2;
  T prev_err = 0;
  for (std::size_t t = 0; t < ys.size(); ++t) {
    const T err = half - ys[t];
    RateRow r;
    r.iter = static_cast<int>(t);
    r.y = static_cast<double>(ys[t]);
    r.error = static_cast<double>(err);
    r.ratio = (t == 0 || prev_err == 0) ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(err / prev_err);
    rows.push_back(r);
    prev_err = err;
  }
  return rows;
}

}  // namespace

std::vector<RateRow> qt_rate_fixture(double y0, int iters) {
  if (!(y0 > 0.0) || iters < 0) throw UsageError("qt_rate_fixture: y0 must be positive");
  std::vector<Real> ys{Real(y0)};
  const Real two_thirds = Real(2) / 3;
  for (int t = 0; t < iters; ++t) {
    const Real x = pow(2 * ys.back(), -two_thirds);
    ys.push_back(fp::qt_optimal_y<Real>(x, x * x + 1));
  }
  return rows_from(ys);
}

std::vector<RateRow> qt_rate_fixture_double(double y0, int iters) {
  if (!(y0 > 0.0) || iters < 0) throw UsageError("qt_rate_fixture_double: y0 must be positive");
  const auto problem = rate_problem();
  std::vector<double> ys{y0};
  Vec x = Vec::Constant(1, std::pow(2.0 * y0, -2.0 / 3.0));
  numerics::SolverOptions opt;
  opt.grad_tol = 1e-15;
  opt.max_inner_iters = 2000;
  const auto inner = fp::projected_gradient_inner(opt);
  for (int t = 0; t < iters; ++t) {
    // One outer iteration: y from x, then the inner x-step.
    ys.push_back(fp::optimal_auxiliary(problem, x).scalar[0]);
    x = fp::fp_solve(problem, inner, x, 1e-300, 1).x;
  }
  return rows_from(ys);
}

std::vector<double> dinkelbach_recursion(double x0, int iters) {
  std::vector<double> ys{x0 / (x0 * x0 + 1.0)};
  for (int t = 0; t < iters; ++t) {
    const double y = ys.back();
    ys.push_back(2.0 * y / (1.0 + 4.0 * y * y));
  }
  return ys;
}

std::vector<RateRow> dinkelbach_rate_fixture(double x0, double tol, int max_iters) {
  numerics::SolverOptions opt;
  opt.grad_tol = 1e-15;
  opt.max_inner_iters = 2000;
  const auto res = fp::dinkelbach_solve(rate_problem(), fp::projected_gradient_inner(opt), Vec::Constant(1, x0), tol,
                                        max_iters);
  return rows_from(res.y_history);
}

fp::RatioProblem rate_problem(double x_max) {
  fp::RatioProblem p;
  fp::RatioTerm term;
  term.numerator = [](const Vec& x) { return x[0]; };
  term.denominator = [](const Vec& x) { return x[0] * x[0] + 1.0; };
  term.numerator_gradient = [](const Vec&) { return Vec::Ones(1); };
  term.denominator_gradient = [](const Vec& x) { return Vec::Constant(1, 2.0 * x[0]); };
  p.terms.push_back(std::move(term));
  p.feasible = fp::FeasibleSet::box(Vec::Zero(1), Vec::Constant(1, x_max));
  return p;
}

fp::RatioProblem fig1_problem() {
  fp::RatioProblem p;
  fp::RatioTerm term;
  term.numerator = [](const Vec& x) { return x[0]; };
  term.denominator = [](const Vec& x) { return (x[0] - 1.0) * (x[0] - 1.0) + (x[1] - 2.0) * (x[1] - 2.0) + 1.0; };
  term.numerator_gradient = [](const Vec&) {
    Vec g(2);
    g << 1.0, 0.0;
    return g;
  };
  term.denominator_gradient = [](const Vec& x) {
    Vec g(2);
    g << 2.0 * (x[0] - 1.0), 2.0 * (x[1] - 2.0);
    return g;
  };
  p.terms.push_back(std::move(term));
  p.feasible = fp::FeasibleSet::box(Vec::Zero(2), Vec::Constant(2, 10.0));
  return p;
}

fp::FpResult fig1_solve(const Vec& x0, double tol, int max_iters) {
  return fp::fp_solve(fig1_problem(), {}, x0, tol, max_iters);
}

}  // namespace fracprog::netsim
