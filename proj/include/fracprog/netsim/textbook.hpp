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

#include <vector>

#include "fracprog/fp_core.hpp"

namespace fracprog::netsim {

/// One row of a convergence-rate table for maximizing x / (x^2 + 1), whose
/// optimal ratio is 1/2. error = 1/2 - y; ratio = error[t] / error[t-1]
/// (NaN on row 0 or when the previous error is zero).
struct RateRow {
  int iter = 0;
  double y = 0.0;
  double error = 0.0;
  double ratio = 0.0;
};

/// Quadratic-transform iteration on x / (x^2 + 1) from y0, with the x-step
/// x = (2y)^(-2/3) in closed form. Runs in 50-digit binary floating point so
/// the error ratio stays resolvable for many more iterations than double.
std::vector<RateRow> qt_rate_fixture(double y0, int iters);

/// Same problem in double precision through the generic solver.
std::vector<RateRow> qt_rate_fixture_double(double y0, int iters);

/// Dinkelbach on x / (x^2 + 1) from x0 through the generic driver.
std::vector<RateRow> dinkelbach_rate_fixture(double x0, double tol, int max_iters);

/// The recursion y <- 2y / (1 + 4y^2) started from x0 / (x0^2 + 1).
std::vector<double> dinkelbach_recursion(double x0, int iters);

/// x / (x^2 + 1) over the box [0, x_max].
fp::RatioProblem rate_problem(double x_max = 100.0);

/// x1 / ((x1 - 1)^2 + (x2 - 2)^2 + 1) over [0, 10]^2; optimum (sqrt 2, 2).
fp::RatioProblem fig1_problem();
fp::FpResult fig1_solve(const Vec& x0, double tol, int max_iters);

}  // namespace fracprog::netsim
