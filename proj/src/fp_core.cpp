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

#include "fracprog/fp_core.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <utility>

namespace fracprog::fp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Floor under A when differentiating sqrt(A) at the boundary of its domain.
constexpr double kSqrtFloor = 1e-300;

std::string term_label(std::size_t m) { return "term " + std::to_string(m); }

struct ScalarEval {
  double A;
  double B;
};

ScalarEval eval_scalar(const RatioTerm& term, std::size_t m, const Vec& x) {
  const double A = term.numerator(x);
  const double B = term.denominator(x);
  if (!(A >= 0.0)) throw DomainError(term_label(m) + ": numerator negative or undefined");
  if (!(B > 0.0)) throw DomainError(term_label(m) + ": denominator not positive");
  return {A, B};
}

double md_ratio(const MdRatioTerm& term, std::size_t m, const Vec& x) {
  const CVec a = term.numerator(x);
  const CMat B = term.denominator(x);
  try {
    return std::real(a.dot(numerics::hpd_solve(B, a)));
  } catch (const ConditioningError&) {
    throw DomainError(term_label(m) + ": denominator matrix not positive definite");
  }
}

Vec ratio_gradient(const RatioTerm& term, const Vec& x, double A, double B) {
  return (term.numerator_gradient(x) * B - A * term.denominator_gradient(x)) / (B * B);
}

// Indices whose value is within a relative band of the minimum.
std::vector<std::size_t> active_set(const Vec& values) {
  const double lo = values.minCoeff();
  const double band = 1e-9 * (1.0 + std::abs(lo));
  std::vector<std::size_t> active;
  for (Eigen::Index m = 0; m < values.size(); ++m)
    if (values[m] <= lo + band) active.push_back(static_cast<std::size_t>(m));
  return active;
}

Vec average_of(const std::vector<Vec>& grads, const std::vector<std::size_t>& idx) {
  Vec d = Vec::Zero(grads.front().size());
  for (std::size_t m : idx) d += grads[m];
  return d / static_cast<double>(idx.size());
}

// Per-term transformed values and gradients for fixed auxiliaries.
struct Transformed {
  const RatioProblem* problem;
  AuxiliaryVector aux;

  Vec values(const Vec& x) const {
    const std::size_t M = problem->size();
    Vec out(static_cast<Eigen::Index>(M));
    for (std::size_t m = 0; m < M; ++m) {
      if (problem->multidimensional()) {
        const auto& t = problem->md_terms[m];
        out[static_cast<Eigen::Index>(m)] = qt_md_value(t.numerator(x), t.denominator(x), aux.vector[m]);
      } else {
        const auto ev = eval_scalar(problem->terms[m], m, x);
        out[static_cast<Eigen::Index>(m)] = qt_value(ev.A, ev.B, aux.scalar[static_cast<Eigen::Index>(m)]);
      }
    }
    return out;
  }

  std::vector<Vec> gradients(const Vec& x) const {
    const std::size_t M = problem->size();
    std::vector<Vec> out;
    out.reserve(M);
    for (std::size_t m = 0; m < M; ++m) {
      if (problem->multidimensional()) {
        out.push_back(problem->md_terms[m].transformed_gradient(x, aux.vector[m]));
        continue;
      }
      const auto& t = problem->terms[m];
      const double y = aux.scalar[static_cast<Eigen::Index>(m)];
      if (y == 0.0) {
        out.push_back(Vec::Zero(x.size()));
        continue;
      }
      const auto ev = eval_scalar(t, m, x);
      const double inv_sqrt = 1.0 / std::sqrt(std::max(ev.A, kSqrtFloor));
      out.push_back(y * inv_sqrt * t.numerator_gradient(x) - y * y * t.denominator_gradient(x));
    }
    return out;
  }
};

InnerProblem make_inner(const RatioProblem& problem, const AuxiliaryVector& aux) {
  auto tr = std::make_shared<Transformed>(Transformed{&problem, aux});
  InnerProblem ip;
  ip.term_values = [tr](const Vec& x) { return tr->values(x); };
  ip.term_gradients = [tr](const Vec& x) { return tr->gradients(x); };
  switch (problem.combiner) {
    case Combiner::Sum:
      ip.value = [tr](const Vec& x) { return tr->values(x).sum(); };
      ip.gradient = [tr](const Vec& x) {
        const auto g = tr->gradients(x);
        Vec sum = Vec::Zero(x.size());
        for (const auto& gm : g) sum += gm;
        return sum;
      };
      break;
    case Combiner::SumOfFunctions:
      ip.value = [tr, &problem](const Vec& x) {
        const Vec q = tr->values(x);
        double total = 0.0;
        for (Eigen::Index m = 0; m < q.size(); ++m) {
          const double fm = problem.outer[static_cast<std::size_t>(m)].value(q[m]);
          if (!std::isfinite(fm)) return kNegInf;
          total += fm;
        }
        return total;
      };
      ip.gradient = [tr, &problem](const Vec& x) {
        const Vec q = tr->values(x);
        const auto g = tr->gradients(x);
        Vec sum = Vec::Zero(x.size());
        for (std::size_t m = 0; m < g.size(); ++m)
          sum += problem.outer[m].derivative(q[static_cast<Eigen::Index>(m)]) * g[m];
        return sum;
      };
      break;
    case Combiner::MaxMin:
      ip.value = [tr](const Vec& x) { return tr->values(x).minCoeff(); };
      ip.gradient = [tr](const Vec& x) { return average_of(tr->gradients(x), active_set(tr->values(x))); };
      break;
  }
  return ip;
}

}  // namespace

// ---------------------------------------------------------------------------

double qt_md_value(const CVec& a, const CMat& B, const CVec& y) {
  if (B.rows() != B.cols() || B.rows() != a.size() || a.size() != y.size())
    throw DimensionError("qt_md_value: dimension mismatch");
  if (numerics::hermitian_defect(B) > 1e-10) throw DomainError("qt_md_value: B is not Hermitian");
  return 2.0 * std::real(y.dot(a)) - std::real(y.dot(B * y));
}

CVec qt_md_optimal_y(const CVec& a, const CMat& B) { return numerics::hpd_solve(B, a); }

// ---------------------------------------------------------------------------

FeasibleSet FeasibleSet::box(Vec lo, Vec hi) {
  if (lo.size() != hi.size() || lo.size() == 0) throw UsageError("FeasibleSet::box: bad bound sizes");
  if (!lo.allFinite() || !hi.allFinite()) throw UsageError("FeasibleSet::box: bounds must be finite");
  if ((lo.array() > hi.array()).any()) throw UsageError("FeasibleSet::box: lower bound exceeds upper bound");
  FeasibleSet s;
  s.kind_ = Kind::Box;
  s.dimension_ = static_cast<std::size_t>(lo.size());
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  return s;
}

namespace {
void check_groups(std::size_t dimension, const numerics::Groups& groups, const std::vector<double>& limits,
                  const char* what) {
  if (dimension == 0) throw UsageError(std::string(what) + ": dimension must be positive");
  if (groups.size() != limits.size()) throw UsageError(std::string(what) + ": one limit per group");
  std::vector<int> seen(dimension, 0);
  for (const auto& g : groups)
    for (std::size_t idx : g) {
      if (idx >= dimension) throw UsageError(std::string(what) + ": group index out of range");
      ++seen[idx];
    }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; }))
    throw UsageError(std::string(what) + ": groups must partition the coordinates");
  for (double r : limits)
    if (!(r > 0.0) || !std::isfinite(r)) throw UsageError(std::string(what) + ": limits must be positive");
}
}  // namespace

FeasibleSet FeasibleSet::group_ball(std::size_t dimension, numerics::Groups groups, std::vector<double> radii) {
  check_groups(dimension, groups, radii, "FeasibleSet::group_ball");
  FeasibleSet s;
  s.kind_ = Kind::PerGroupBall;
  s.dimension_ = dimension;
  s.groups_ = std::move(groups);
  s.limits_ = std::move(radii);
  return s;
}

FeasibleSet FeasibleSet::simplex_sum(std::size_t dimension, numerics::Groups groups, std::vector<double> budgets) {
  check_groups(dimension, groups, budgets, "FeasibleSet::simplex_sum");
  FeasibleSet s;
  s.kind_ = Kind::SimplexSum;
  s.dimension_ = dimension;
  s.groups_ = std::move(groups);
  s.limits_ = std::move(budgets);
  return s;
}

Vec FeasibleSet::project(const Vec& x) const {
  if (static_cast<std::size_t>(x.size()) != dimension_) throw DimensionError("FeasibleSet::project: wrong size");
  switch (kind_) {
    case Kind::Box:
      return numerics::project_box(x, lo_, hi_);
    case Kind::PerGroupBall:
      return numerics::project_group_ball<Vec>(x, groups_, limits_);
    case Kind::SimplexSum:
      return numerics::project_simplex_sum(x, groups_, limits_);
  }
  return x;
}

bool FeasibleSet::contains(const Vec& x, double tol) const {
  if (static_cast<std::size_t>(x.size()) != dimension_ || !x.allFinite()) return false;
  switch (kind_) {
    case Kind::Box:
      return ((x - lo_).array() >= -tol).all() && ((hi_ - x).array() >= -tol).all();
    case Kind::PerGroupBall:
      for (std::size_t g = 0; g < groups_.size(); ++g) {
        double sq = 0.0;
        for (std::size_t idx : groups_[g]) sq += x[static_cast<Eigen::Index>(idx)] * x[static_cast<Eigen::Index>(idx)];
        if (std::sqrt(sq) > limits_[g] * (1.0 + tol) + tol) return false;
      }
      return true;
    case Kind::SimplexSum:
      if ((x.array() < -tol).any()) return false;
      for (std::size_t g = 0; g < groups_.size(); ++g) {
        double sum = 0.0;
        for (std::size_t idx : groups_[g]) sum += x[static_cast<Eigen::Index>(idx)];
        if (sum > limits_[g] * (1.0 + tol) + tol) return false;
      }
      return true;
  }
  return false;
}

double FeasibleSet::diameter() const {
  switch (kind_) {
    case Kind::Box:
      return (hi_ - lo_).norm();
    case Kind::PerGroupBall: {
      double sq = 0.0;
      for (double r : limits_) sq += 4.0 * r * r;
      return std::sqrt(sq);
    }
    case Kind::SimplexSum: {
      double sq = 0.0;
      for (double b : limits_) sq += 2.0 * b * b;
      return std::sqrt(sq);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------

void RatioProblem::validate() const {
  if (terms.empty() == md_terms.empty())
    throw UsageError("RatioProblem: exactly one of scalar or multidimensional terms must be given");
  for (const auto& t : terms)
    if (!t.numerator || !t.denominator || !t.numerator_gradient || !t.denominator_gradient)
      throw UsageError("RatioProblem: scalar term is missing an evaluator");
  for (const auto& t : md_terms)
    if (!t.numerator || !t.denominator || !t.transformed_gradient)
      throw UsageError("RatioProblem: multidimensional term is missing an evaluator");
  if (combiner == Combiner::SumOfFunctions) {
    if (outer.size() != size()) throw UsageError("RatioProblem: SumOfFunctions needs one outer function per term");
    for (const auto& f : outer)
      if (!f.value || !f.derivative) throw UsageError("RatioProblem: outer function is missing an evaluator");
  } else if (!outer.empty()) {
    throw UsageError("RatioProblem: outer functions are only meaningful for SumOfFunctions");
  }
}

Vec RatioProblem::ratios(const Vec& x) const {
  Vec r(static_cast<Eigen::Index>(size()));
  for (std::size_t m = 0; m < size(); ++m) {
    if (multidimensional()) {
      r[static_cast<Eigen::Index>(m)] = md_ratio(md_terms[m], m, x);
    } else {
      const auto ev = eval_scalar(terms[m], m, x);
      r[static_cast<Eigen::Index>(m)] = ev.A / ev.B;
    }
  }
  return r;
}

double RatioProblem::objective(const Vec& x) const {
  const Vec r = ratios(x);
  switch (combiner) {
    case Combiner::Sum:
      return r.sum();
    case Combiner::SumOfFunctions: {
      double total = 0.0;
      for (Eigen::Index m = 0; m < r.size(); ++m) total += outer[static_cast<std::size_t>(m)].value(r[m]);
      return total;
    }
    case Combiner::MaxMin:
      return r.minCoeff();
  }
  return 0.0;
}

AuxiliaryVector optimal_auxiliary(const RatioProblem& problem, const Vec& x) {
  AuxiliaryVector aux;
  if (problem.multidimensional()) {
    for (std::size_t m = 0; m < problem.md_terms.size(); ++m) {
      const auto& t = problem.md_terms[m];
      try {
        aux.vector.push_back(qt_md_optimal_y(t.numerator(x), t.denominator(x)));
      } catch (const ConditioningError&) {
        throw DomainError(term_label(m) + ": denominator matrix not positive definite");
      }
    }
  } else {
    aux.scalar.resize(static_cast<Eigen::Index>(problem.terms.size()));
    for (std::size_t m = 0; m < problem.terms.size(); ++m) {
      const auto ev = eval_scalar(problem.terms[m], m, x);
      aux.scalar[static_cast<Eigen::Index>(m)] = qt_optimal_y(ev.A, ev.B);
    }
  }
  return aux;
}

double stationarity_residual(const RatioProblem& problem, const Vec& x) {
  const std::size_t M = problem.size();
  std::vector<Vec> grads;
  grads.reserve(M);
  Vec r(static_cast<Eigen::Index>(M));
  const AuxiliaryVector aux = problem.multidimensional() ? optimal_auxiliary(problem, x) : AuxiliaryVector{};
  for (std::size_t m = 0; m < M; ++m) {
    if (problem.multidimensional()) {
      grads.push_back(problem.md_terms[m].transformed_gradient(x, aux.vector[m]));
      r[static_cast<Eigen::Index>(m)] = md_ratio(problem.md_terms[m], m, x);
    } else {
      const auto ev = eval_scalar(problem.terms[m], m, x);
      grads.push_back(ratio_gradient(problem.terms[m], x, ev.A, ev.B));
      r[static_cast<Eigen::Index>(m)] = ev.A / ev.B;
    }
  }
  Vec g = Vec::Zero(x.size());
  switch (problem.combiner) {
    case Combiner::Sum:
      for (const auto& gm : grads) g += gm;
      break;
    case Combiner::SumOfFunctions:
      for (std::size_t m = 0; m < M; ++m) g += problem.outer[m].derivative(r[static_cast<Eigen::Index>(m)]) * grads[m];
      break;
    case Combiner::MaxMin:
      g = average_of(grads, active_set(r));
      break;
  }
  return (x - problem.feasible.project(x + g)).norm();
}

// ---------------------------------------------------------------------------

InnerSolver projected_gradient_inner(numerics::SolverOptions options) {
  options.validate();
  return [options](const InnerProblem& ip, const FeasibleSet& set, const Vec& x0) {
    auto res = numerics::projected_gradient_maximize<Vec>(
        ip.value, ip.gradient, [&set](const Vec& v) { return set.project(v); }, x0, options);
    return res.x;
  };
}

InnerSolver maxmin_subgradient_inner(numerics::SolverOptions options) {
  options.validate();
  return [options](const InnerProblem& ip, const FeasibleSet& set, const Vec& x0) {
    Vec best = set.project(x0);
    double best_val = ip.term_values(best).minCoeff();
    const double scale = std::max(set.diameter(), 1e-300);
    double step = 0.1 * scale;
    const double min_step = 1e-15 * scale;
    for (int k = 0; k < options.max_inner_iters && step > min_step; ++k) {
      const Vec vals = ip.term_values(best);
      const auto grads = ip.term_gradients(best);
      const Vec d = average_of(grads, active_set(vals));
      const double nrm = d.norm();
      if (nrm == 0.0) break;
      const Vec trial = set.project(best + (step / nrm) * d);
      const double tv = ip.term_values(trial).minCoeff();
      if (tv > best_val) {
        best = trial;
        best_val = tv;
        step *= 1.5;
      } else {
        step *= options.backtrack_factor;
      }
    }
    return best;
  };
}

// ---------------------------------------------------------------------------

DinkelbachResult dinkelbach_solve(const RatioProblem& problem, const InnerSolver& inner, const Vec& x0, double tol,
                                  int max_iters) {
  problem.validate();
  if (problem.multidimensional() || problem.terms.size() != 1)
    throw UsageError("dinkelbach_solve: requires exactly one scalar ratio term");
  if (!(tol > 0.0) || max_iters <= 0) throw UsageError("dinkelbach_solve: tol and max_iters must be positive");
  if (!problem.feasible.contains(x0)) throw DomainError("dinkelbach_solve: x0 is infeasible");
  const InnerSolver solve = inner ? inner : projected_gradient_inner();
  const RatioTerm& term = problem.terms.front();

  DinkelbachResult out;
  Vec x = x0;
  auto ev = eval_scalar(term, 0, x);
  double y = ev.A / ev.B;
  out.y_history.push_back(y);
  out.trace.record(y, 0.0);

  for (int t = 0; t < max_iters; ++t) {
    InnerProblem ip;
    ip.value = [&term, y](const Vec& v) {
      const auto e = eval_scalar(term, 0, v);
      return e.A - y * e.B;
    };
    ip.gradient = [&term, y](const Vec& v) { return Vec(term.numerator_gradient(v) - y * term.denominator_gradient(v)); };
    ip.term_values = [&ip](const Vec& v) { return Vec::Constant(1, ip.value(v)); };
    ip.term_gradients = [&ip](const Vec& v) { return std::vector<Vec>{ip.gradient(v)}; };
    x = solve(ip, problem.feasible, x);
    ev = eval_scalar(term, 0, x);
    const double y_next = ev.A / ev.B;
    out.y_history.push_back(y_next);
    out.trace.record(y_next, std::abs(y_next - y));
    const bool done = std::abs(y_next - y) <= tol;
    y = y_next;
    if (done) {
      out.converged = true;
      break;
    }
  }
  out.x = x;
  out.y = y;
  return out;
}

FpResult fp_solve(const RatioProblem& problem, const InnerSolver& inner, const Vec& x0, double tol, int max_iters) {
  problem.validate();
  if (!(tol > 0.0) || max_iters <= 0) throw UsageError("fp_solve: tol and max_iters must be positive");
  if (!problem.feasible.contains(x0)) throw DomainError("fp_solve: x0 is infeasible");
  InnerSolver solve = inner;
  if (!solve) solve = problem.combiner == Combiner::MaxMin ? maxmin_subgradient_inner() : projected_gradient_inner();

  FpResult out;
  Vec x = x0;
  double f_prev = problem.objective(x);
  out.trace.record(f_prev, stationarity_residual(problem, x));

  for (int t = 0; t < max_iters; ++t) {
    const AuxiliaryVector aux = optimal_auxiliary(problem, x);
    const InnerProblem ip = make_inner(problem, aux);
    Vec x_next = solve(ip, problem.feasible, x);
    // The inner step starts from x; keep x if an external solver returned worse.
    if (ip.value(x_next) < ip.value(x)) x_next = x;
    const double f = problem.objective(x_next);
    out.trace.record(f, stationarity_residual(problem, x_next));
    x = std::move(x_next);
    if (objective_settled(f_prev, f, tol)) {
      out.converged = true;
      break;
    }
    f_prev = f;
  }
  out.x = x;
  out.aux = optimal_auxiliary(problem, x);
  return out;
}

}  // namespace fracprog::fp
