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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "fracprog/types.hpp"

namespace fracprog::numerics {

struct SolverOptions {
  int max_inner_iters = 500;
  double grad_tol = 1e-10;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  double initial_step = 1.0;

  /// Throws UsageError if any field is out of range.
  void validate() const;
};

/// Outcome of an inner maximization. `residual` is the unit-step projected
/// gradient norm ||x - P(x + grad f(x))|| at the returned point.
template <class V>
struct PgResult {
  V x;
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

template <class V>
using Objective = std::function<double(const V&)>;
template <class V>
using Gradient = std::function<V(const V&)>;
template <class V>
using Projection = std::function<V(const V&)>;

/// Real inner product; for complex vectors this is Re{a^H b}, which makes the
/// real-equivalent gradient (twice the Wirtinger gradient d f / d conj(v))
/// the steepest-ascent direction.
template <class V>
double real_dot(const V& a, const V& b) {
  return std::real(a.dot(b));
}

/// Monotone spectral projected gradient ascent with Armijo backtracking along
/// the projection arc. The objective may return -inf outside its domain; such
/// trial points are rejected by the line search.
template <class V>
PgResult<V> projected_gradient_maximize(const Objective<V>& f, const Gradient<V>& grad,
                                        const Projection<V>& project, const V& x0,
                                        const SolverOptions& opt = {}) {
  opt.validate();
  constexpr double kMinStep = 1e-30;
  constexpr double kMaxStep = 1e30;

  PgResult<V> out;
  V x = project(x0);
  double fx = f(x);
  if (!std::isfinite(fx)) throw DomainError("projected_gradient_maximize: objective not finite at start");
  V g = grad(x);
  double step = opt.initial_step;

  auto unit_residual = [&](const V& at, const V& grad_at) { return (at - project(at + grad_at)).norm(); };

  for (int k = 0; k < opt.max_inner_iters; ++k) {
    out.residual = unit_residual(x, g);
    if (out.residual <= opt.grad_tol) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    V trial;
    double ft = 0.0;
    while (step >= kMinStep) {
      trial = project(x + step * g);
      const V d = trial - x;
      ft = f(trial);
      if (std::isfinite(ft) && ft >= fx + opt.armijo_c * real_dot(g, d)) {
        accepted = true;
        break;
      }
      step *= opt.backtrack_factor;
    }
    out.iterations = k + 1;
    if (!accepted) break;  // stalled: numerically flat along the arc

    V g_new = grad(trial);
    const V s = trial - x;
    const V yk = g - g_new;  // gradient change of the minimized function -f
    const double sy = real_dot(s, yk);
    const double ss = real_dot(s, s);
    step = (sy > 0.0) ? std::clamp(ss / sy, kMinStep, kMaxStep) : std::min(step * 4.0, kMaxStep);
    if (ss == 0.0) {
      x = std::move(trial);
      fx = ft;
      g = std::move(g_new);
      out.residual = unit_residual(x, g);
      out.converged = out.residual <= opt.grad_tol;
      break;
    }
    x = std::move(trial);
    fx = ft;
    g = std::move(g_new);
  }
  if (!out.converged) {
    out.residual = unit_residual(x, g);
    out.converged = out.residual <= opt.grad_tol;
  }
  out.x = std::move(x);
  out.value = fx;
  return out;
}

/// Elementwise clamp onto [lo, hi].
Vec project_box(const Vec& x, const Vec& lo, const Vec& hi);

/// Index sets partitioning the coordinates of a vector.
using Groups = std::vector<std::vector<std::size_t>>;

/// Scales every group onto its Euclidean ball: v_g <- v_g * min(1, r_g / ||v_g||).
template <class V>
V project_group_ball(const V& v, const Groups& groups, const std::vector<double>& radii) {
  if (groups.size() != radii.size()) throw DimensionError("project_group_ball: groups/radii size mismatch");
  V out = v;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double sq = 0.0;
    for (std::size_t idx : groups[g]) sq += std::norm(v[static_cast<Eigen::Index>(idx)]);
    const double nrm = std::sqrt(sq);
    if (nrm > radii[g]) {
      const double scale = radii[g] / nrm;
      for (std::size_t idx : groups[g]) out[static_cast<Eigen::Index>(idx)] *= scale;
    }
  }
  return out;
}

/// Projection onto {x >= 0, sum_{i in g} x_i <= budget_g for every group g}.
Vec project_simplex_sum(const Vec& x, const Groups& groups, const std::vector<double>& budgets);

/// Projection onto {x >= 0, ||x_g|| <= r_g}: clamp then group-ball scaling.
Vec project_nonneg_group_ball(const Vec& x, const Groups& groups, const std::vector<double>& radii);

/// Solves B x = a for Hermitian positive definite B by Cholesky.
/// Throws ConditioningError when the factorization meets a nonpositive pivot.
CVec hpd_solve(const CMat& B, const CVec& a);

/// Max-abs entry of B - B^H relative to max(1, max-abs entry of B).
double hermitian_defect(const CMat& B);

/// For nonincreasing f, returns (within tol) the smallest x >= lo with
/// f(x) <= 0. Returns lo when f(lo) <= 0 already. The upper end is doubled
/// until f(hi) <= 0; past `cap` a BracketError is raised.
double bisection_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                      double cap = 1152921504606846976.0 /* 2^60 */);

}  // namespace fracprog::numerics
