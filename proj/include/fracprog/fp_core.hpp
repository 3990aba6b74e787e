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

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "fracprog/numerics.hpp"
#include "fracprog/trace.hpp"
#include "fracprog/types.hpp"

namespace fracprog::fp {

/// Affine reparametrization s = t1 * y + t2 of the auxiliary variable.
/// The default (1, 0) is the plain transform 2 y sqrt(A) - y^2 B.
struct QtParams {
  double t1 = 1.0;
  double t2 = 0.0;
};

/// 2 s sqrt(A) - s^2 B with s = t1 y + t2. Its maximum over y is A / B.
/// `Real` may be any floating type with an ADL-visible sqrt (long double,
/// boost::multiprecision numbers, ...).
template <class Real>
Real qt_value(const Real& A, const Real& B, const Real& y, const QtParams& params = {}) {
  using std::sqrt;
  if (A < 0) throw DomainError("qt_value: numerator must be nonnegative");
  if (!(B > 0)) throw DomainError("qt_value: denominator must be positive");
  if (params.t1 == 0.0) throw UsageError("qt_value: t1 must be nonzero");
  const Real s = Real(params.t1) * y + Real(params.t2);
  return Real(2 * s * sqrt(A) - s * s * B);
}

/// Maximizer in y of qt_value with default params: sqrt(A) / B (zero when A = 0).
template <class Real>
Real qt_optimal_y(const Real& A, const Real& B) {
  using std::sqrt;
  if (A < 0) throw DomainError("qt_optimal_y: numerator must be nonnegative");
  if (!(B > 0)) throw DomainError("qt_optimal_y: denominator must be positive");
  return Real(sqrt(A) / B);
}

/// Maximizer in y of qt_value under an affine reparametrization.
inline double qt_optimal_y(double A, double B, const QtParams& params) {
  if (params.t1 == 0.0) throw UsageError("qt_optimal_y: t1 must be nonzero");
  return (qt_optimal_y(A, B) - params.t2) / params.t1;
}

/// 2 Re{y^H a} - y^H B y for Hermitian B.
double qt_md_value(const CVec& a, const CMat& B, const CVec& y);

/// B^{-1} a for Hermitian positive definite B.
CVec qt_md_optimal_y(const CVec& a, const CMat& B);

// ---------------------------------------------------------------------------
// Problem description
// ---------------------------------------------------------------------------

/// One ratio A(x) / B(x) with A >= 0 and B > 0 on the feasible set.
struct RatioTerm {
  std::function<double(const Vec&)> numerator;
  std::function<double(const Vec&)> denominator;
  std::function<Vec(const Vec&)> numerator_gradient;
  std::function<Vec(const Vec&)> denominator_gradient;
};

/// One multidimensional ratio a(x)^H B(x)^{-1} a(x) with B Hermitian positive
/// definite. `transformed_gradient(x, y)` returns the gradient in x of
/// 2 Re{y^H a(x)} - y^H B(x) y.
struct MdRatioTerm {
  std::function<CVec(const Vec&)> numerator;
  std::function<CMat(const Vec&)> denominator;
  std::function<Vec(const Vec&, const CVec&)> transformed_gradient;
};

/// Nondecreasing concave outer function f_m and its derivative.
struct OuterFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

enum class Combiner { Sum, SumOfFunctions, MaxMin };

class FeasibleSet {
 public:
  enum class Kind { Box, PerGroupBall, SimplexSum };

  static FeasibleSet box(Vec lo, Vec hi);
  static FeasibleSet group_ball(std::size_t dimension, numerics::Groups groups, std::vector<double> radii);
  static FeasibleSet simplex_sum(std::size_t dimension, numerics::Groups groups, std::vector<double> budgets);

  Kind kind() const { return kind_; }
  std::size_t dimension() const { return dimension_; }

  Vec project(const Vec& x) const;
  bool contains(const Vec& x, double tol = 1e-12) const;
  /// Euclidean diameter (finite for every supported kind).
  double diameter() const;

 private:
  FeasibleSet() = default;

  Kind kind_ = Kind::Box;
  std::size_t dimension_ = 0;
  Vec lo_, hi_;
  numerics::Groups groups_;
  std::vector<double> limits_;
};

/// Multi-ratio problem. Exactly one of `terms` / `md_terms` is non-empty.
struct RatioProblem {
  std::vector<RatioTerm> terms;
  std::vector<MdRatioTerm> md_terms;
  Combiner combiner = Combiner::Sum;
  std::vector<OuterFunction> outer;  // SumOfFunctions only, one per term
  FeasibleSet feasible = FeasibleSet::box(Vec::Zero(1), Vec::Ones(1));

  std::size_t size() const { return terms.empty() ? md_terms.size() : terms.size(); }
  bool multidimensional() const { return !md_terms.empty(); }

  /// Throws UsageError on malformed problems.
  void validate() const;

  /// Ratio values at x; throws DomainError naming the offending term.
  Vec ratios(const Vec& x) const;

  /// Objective in the original ratio metric.
  double objective(const Vec& x) const;
};

/// Auxiliary variables: one real per scalar term or one complex vector per
/// multidimensional term.
struct AuxiliaryVector {
  Vec scalar;
  std::vector<CVec> vector;
};

/// Transformed problem handed to an inner solver for fixed auxiliaries.
struct InnerProblem {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Vec(const Vec&)> term_values;
  std::function<std::vector<Vec>(const Vec&)> term_gradients;
};

using InnerSolver = std::function<Vec(const InnerProblem&, const FeasibleSet&, const Vec& x0)>;

/// Smooth inner maximization by projected gradient.
InnerSolver projected_gradient_inner(numerics::SolverOptions options = {});

/// Inner maximization of the pointwise minimum of the transformed terms by
/// projected subgradient ascent; the direction averages the gradients of the
/// active terms and the step halves whenever the minimum fails to improve.
InnerSolver maxmin_subgradient_inner(numerics::SolverOptions options = {});

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

struct DinkelbachResult {
  Vec x;
  double y = 0.0;
  std::vector<double> y_history;  // y[0] = A(x0)/B(x0), y[t] after t inner solves
  IterationTrace trace;
  bool converged = false;
};

/// Single-ratio Dinkelbach iteration: maximize A - y B, then y <- A/B.
/// Stops when |y[t+1] - y[t]| <= tol.
DinkelbachResult dinkelbach_solve(const RatioProblem& problem, const InnerSolver& inner, const Vec& x0,
                                  double tol, int max_iters);

struct FpResult {
  Vec x;
  AuxiliaryVector aux;
  IterationTrace trace;
  bool converged = false;
};

/// Alternating quadratic-transform iteration. The y-step is closed form, the
/// x-step calls `inner` (defaulted by combiner when empty). Trace objectives
/// are in the original ratio metric; stops when the relative change is <= tol.
FpResult fp_solve(const RatioProblem& problem, const InnerSolver& inner, const Vec& x0, double tol,
                  int max_iters);

/// Optimal auxiliaries at x.
AuxiliaryVector optimal_auxiliary(const RatioProblem& problem, const Vec& x);

/// Unit-step projected gradient residual of the original objective at x
/// (for MaxMin, of the averaged active-term gradient).
double stationarity_residual(const RatioProblem& problem, const Vec& x);

}  // namespace fracprog::fp
