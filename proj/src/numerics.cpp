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

#include "fracprog/numerics.hpp"

#include <algorithm>
#include <numeric>

namespace fracprog::numerics {

void SolverOptions::validate() const {
  if (max_inner_iters <= 0) throw UsageError("SolverOptions: max_inner_iters must be positive");
  if (!(grad_tol > 0.0)) throw UsageError("SolverOptions: grad_tol must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw UsageError("SolverOptions: armijo_c must lie in (0,1)");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
    throw UsageError("SolverOptions: backtrack_factor must lie in (0,1)");
  if (!(initial_step > 0.0)) throw UsageError("SolverOptions: initial_step must be positive");
}

Vec project_box(const Vec& x, const Vec& lo, const Vec& hi) {
  if (x.size() != lo.size() || x.size() != hi.size()) throw DimensionError("project_box: size mismatch");
  return x.cwiseMax(lo).cwiseMin(hi);
}

namespace {

// Euclidean projection of v onto {z >= 0, sum z = budget} (sort-based).
void project_onto_simplex(std::vector<double>& v, double budget) {
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumsum += sorted[k];
    const double t = (cumsum - budget) / static_cast<double>(k + 1);
    if (sorted[k] - t > 0.0) theta = t;
  }
  for (double& e : v) e = std::max(e - theta, 0.0);
}

}  // namespace

Vec project_simplex_sum(const Vec& x, const Groups& groups, const std::vector<double>& budgets) {
  if (groups.size() != budgets.size()) throw DimensionError("project_simplex_sum: groups/budgets size mismatch");
  Vec out = x.cwiseMax(0.0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double sum = 0.0;
    for (std::size_t idx : groups[g]) sum += out[static_cast<Eigen::Index>(idx)];
    if (sum <= budgets[g]) continue;
    std::vector<double> block;
    block.reserve(groups[g].size());
    for (std::size_t idx : groups[g]) block.push_back(x[static_cast<Eigen::Index>(idx)]);
    project_onto_simplex(block, budgets[g]);
    for (std::size_t k = 0; k < groups[g].size(); ++k) out[static_cast<Eigen::Index>(groups[g][k])] = block[k];
  }
  return out;
}

Vec project_nonneg_group_ball(const Vec& x, const Groups& groups, const std::vector<double>& radii) {
  return project_group_ball<Vec>(x.cwiseMax(0.0), groups, radii);
}

CVec hpd_solve(const CMat& B, const CVec& a) {
  if (B.rows() != B.cols() || B.rows() != a.size()) throw DimensionError("hpd_solve: dimension mismatch");
  Eigen::LLT<CMat> llt(B);
  if (llt.info() != Eigen::Success) throw ConditioningError("hpd_solve: Cholesky factorization failed");
  return llt.solve(a);
}

double hermitian_defect(const CMat& B) {
  if (B.rows() != B.cols()) throw DimensionError("hermitian_defect: matrix not square");
  if (B.size() == 0) return 0.0;
  const double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
  return (B - B.adjoint()).cwiseAbs().maxCoeff() / scale;
}

double bisection_root(const std::function<double(double)>& f, double lo, double hi, double tol, double cap) {
  if (!(tol > 0.0)) throw UsageError("bisection_root: tol must be positive");
  if (f(lo) <= 0.0) return lo;
  if (hi <= lo) hi = lo + 1.0;
  while (!(f(hi) <= 0.0)) {
    if (hi >= cap) throw BracketError("bisection_root: no sign change below the bracket cap");
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace fracprog::numerics
