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

#include "fracprog/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracprog::pc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void check_powers(const Mat& P, const SisoNetwork& net, const char* who) {
  if (static_cast<std::size_t>(P.rows()) != net.links() || static_cast<std::size_t>(P.cols()) != net.bands())
    throw DimensionError(std::string(who) + ": power matrix must be links x bands");
  if (!P.allFinite() || (P.array() < 0.0).any())
    throw DomainError(std::string(who) + ": powers must be finite and nonnegative");
  const double slack = net.p_max * (1.0 + 1e-12);
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    if (P.row(i).sum() > slack) throw DomainError(std::string(who) + ": power budget exceeded");
}

Mat as_column(const Vec& p) { return Mat(p); }

const Utility& utility_at(const std::vector<Utility>* u, std::size_t i) {
  static const Utility id = identity_utility();
  return u ? (*u)[i] : id;
}

void check_utilities(const std::vector<Utility>& u, const SisoNetwork& net) {
  if (u.size() != net.links()) throw UsageError("power control: one utility per link is required");
  for (const auto& f : u)
    if (!f.value || !f.derivative) throw UsageError("power control: utility is missing an evaluator");
}

// Interference-plus-noise at every receiver for band powers p.
Vec interference(const Vec& p, const Mat& G, double noise) {
  Vec total = G * p;
  total.array() -= G.diagonal().array() * p.array();
  return total.array() + noise;
}

Mat optimal_y(const Mat& P, const SisoNetwork& net) {
  Mat Y(P.rows(), P.cols());
  for (std::size_t t = 0; t < net.bands(); ++t) {
    const Mat& G = net.gains[t];
    const Vec p = P.col(idx(t));
    const Vec I = interference(p, G, net.noise);
    Y.col(idx(t)) = (G.diagonal().array() * p.array()).sqrt() / I.array();
  }
  return Y;
}

// Direct surrogate in amplitude coordinates q = sqrt(p), where it is concave
// and smooth. Q is links x bands; Y holds the transform variables.
double surrogate_q(const Mat& Q, const Mat& Y, const SisoNetwork& net, const std::vector<Utility>* util,
                   Mat* grad) {
  const std::size_t L = net.links();
  const std::size_t T = net.bands();
  const double inv_T = 1.0 / static_cast<double>(T);
  Mat logs(idx(L), idx(T));
  Mat arg(idx(L), idx(T));
  for (std::size_t t = 0; t < T; ++t) {
    const Mat& G = net.gains[t];
    const Vec p = Q.col(idx(t)).array().square();
    const Vec I = interference(p, G, net.noise);
    for (std::size_t i = 0; i < L; ++i) {
      const double y = Y(idx(i), idx(t));
      const double a = 1.0 + 2.0 * y * std::sqrt(G(idx(i), idx(i))) * Q(idx(i), idx(t)) - y * y * I[idx(i)];
      if (!(a > 0.0)) return kNegInf;
      arg(idx(i), idx(t)) = a;
      logs(idx(i), idx(t)) = std::log(a);
    }
  }
  const Vec Qrate = logs.rowwise().sum() * inv_T;
  double value = 0.0;
  Vec outer_slope(idx(L));
  for (std::size_t i = 0; i < L; ++i) {
    const Utility& u = utility_at(util, i);
    const double ui = u.value(Qrate[idx(i)]);
    if (!std::isfinite(ui)) return kNegInf;
    value += net.weights[idx(i)] * ui;
    outer_slope[idx(i)] = net.weights[idx(i)] * u.derivative(Qrate[idx(i)]);
  }
  if (grad) {
    grad->setZero(idx(L), idx(T));
    for (std::size_t t = 0; t < T; ++t) {
      const Mat& G = net.gains[t];
      for (std::size_t i = 0; i < L; ++i) {
        const double y = Y(idx(i), idx(t));
        const double c = outer_slope[idx(i)] * inv_T / arg(idx(i), idx(t));
        (*grad)(idx(i), idx(t)) += c * 2.0 * y * std::sqrt(G(idx(i), idx(i)));
        for (std::size_t j = 0; j < L; ++j) {
          if (j == i) continue;
          (*grad)(idx(j), idx(t)) -= c * y * y * G(idx(i), idx(j)) * 2.0 * Q(idx(j), idx(t));
        }
      }
    }
  }
  return value;
}

double projected_residual(const Mat& P, const Mat& grad, const SisoNetwork& net) {
  const std::size_t L = net.links();
  const std::size_t T = net.bands();
  numerics::Groups groups(L);
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t t = 0; t < T; ++t) groups[i].push_back(i + t * L);
  const std::vector<double> budgets(L, net.p_max);
  const Vec x = P.reshaped();
  const Vec g = grad.reshaped();
  return (x - numerics::project_simplex_sum(x + g, groups, budgets)).norm();
}

struct DirectRun {
  Mat P;
  Mat Y;
  IterationTrace trace;
  bool converged = false;
  double residual = 0.0;
};

// Shared loop of the direct method: y-step in closed form, then projected
// gradient ascent on the surrogate over amplitudes.
DirectRun run_direct(const SisoNetwork& net, const std::vector<Utility>* util, const Mat& P0, double tol,
                     int max_iters, const numerics::SolverOptions& inner) {
  if (!(tol > 0.0) || max_iters <= 0) throw UsageError("power control: tol and max_iters must be positive");
  inner.validate();
  const std::size_t L = net.links();
  const std::size_t T = net.bands();
  numerics::Groups groups(L);
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t t = 0; t < T; ++t) groups[i].push_back(i + t * L);
  const std::vector<double> radii(L, std::sqrt(net.p_max));
  static const std::vector<Utility> no_util;
  const std::vector<Utility>& uref = util ? *util : no_util;

  auto objective = [&](const Mat& P) { return util ? utility_objective(P, net, uref) : weighted_sum_rate(P, net); };
  auto residual = [&](const Mat& P) {
    return projected_residual(P, util ? utility_gradient(P, net, uref) : utility_gradient(P, net, {}), net);
  };

  DirectRun run;
  run.P = P0;
  double f = objective(run.P);
  run.residual = residual(run.P);
  run.trace.record(f, run.residual);

  for (int it = 0; it < max_iters; ++it) {
    const Mat Y = optimal_y(run.P, net);
    auto value = [&](const Vec& q) {
      return surrogate_q(q.reshaped(idx(L), idx(T)), Y, net, util, nullptr);
    };
    auto gradient = [&](const Vec& q) {
      Mat g;
      surrogate_q(q.reshaped(idx(L), idx(T)), Y, net, util, &g);
      return Vec(g.reshaped());
    };
    auto project = [&](const Vec& q) { return numerics::project_nonneg_group_ball(q, groups, radii); };
    const Vec q0 = run.P.array().sqrt().matrix().reshaped();
    const auto res = numerics::projected_gradient_maximize<Vec>(value, gradient, project, q0, inner);
    run.P = res.x.array().square().matrix().reshaped(idx(L), idx(T));
    // Squaring can leave a budget a few ulps high.
    for (std::size_t i = 0; i < L; ++i) {
      const double s = run.P.row(idx(i)).sum();
      if (s > net.p_max) run.P.row(idx(i)) *= net.p_max / s;
    }
    run.Y = Y;
    const double f_new = objective(run.P);
    run.residual = residual(run.P);
    run.trace.record(f_new, run.residual);
    const bool settled = objective_settled(f, f_new, tol);
    f = f_new;
    if (settled && run.residual <= 10.0 * tol) {
      run.converged = true;
      break;
    }
  }
  if (run.Y.size() == 0) run.Y = optimal_y(run.P, net);
  return run;
}

}  // namespace

// ---------------------------------------------------------------------------

void SisoNetwork::validate() const {
  if (gains.empty()) throw DimensionError("SisoNetwork: at least one band is required");
  const Eigen::Index L = gains.front().rows();
  if (L == 0) throw DimensionError("SisoNetwork: at least one link is required");
  for (const auto& G : gains) {
    if (G.rows() != L || G.cols() != L) throw DimensionError("SisoNetwork: gain matrices must be links x links");
    if (!G.allFinite() || (G.array() < 0.0).any()) throw DomainError("SisoNetwork: gains must be finite and >= 0");
  }
  if (bands() == 1 && (gains.front().diagonal().array() <= 0.0).any())
    throw DomainError("SisoNetwork: direct gains must be positive");
  if (weights.size() != L) throw DimensionError("SisoNetwork: one weight per link is required");
  if ((weights.array() < 0.0).any() || !weights.allFinite()) throw DomainError("SisoNetwork: weights must be >= 0");
  if (!(noise > 0.0) || !std::isfinite(noise)) throw DomainError("SisoNetwork: noise must be positive");
  if (!(p_max > 0.0) || !std::isfinite(p_max)) throw DomainError("SisoNetwork: p_max must be positive");
}

SisoNetwork SisoNetwork::single_band(Mat gains, Vec weights, double noise, double p_max) {
  SisoNetwork net;
  net.gains.push_back(std::move(gains));
  net.weights = std::move(weights);
  net.noise = noise;
  net.p_max = p_max;
  net.validate();
  return net;
}

Utility identity_utility() {
  return {[](double r) { return r; }, [](double) { return 1.0; }};
}

Utility log_utility(double eps) {
  if (!(eps > 0.0)) throw UsageError("log_utility: eps must be positive");
  return {[eps](double r) { return r + eps > 0.0 ? std::log(r + eps) : kNegInf; },
          [eps](double r) { return 1.0 / (r + eps); }};
}

// ---------------------------------------------------------------------------

Vec sinr(const Vec& p, const Mat& G, double noise) {
  if (G.rows() != G.cols() || p.size() != G.rows()) throw DimensionError("sinr: gain matrix and power vector sizes");
  if (!(noise > 0.0)) throw DomainError("sinr: noise must be positive");
  return (G.diagonal().array() * p.array()) / interference(p, G, noise).array();
}

Vec sinr(const Vec& p, const SisoNetwork& net, std::size_t band) {
  if (band >= net.bands()) throw DimensionError("sinr: band out of range");
  if (static_cast<std::size_t>(p.size()) != net.links()) throw DimensionError("sinr: power vector size");
  return sinr(p, net.gains[band], net.noise);
}

Vec link_rates(const Mat& P, const SisoNetwork& net) {
  if (static_cast<std::size_t>(P.rows()) != net.links() || static_cast<std::size_t>(P.cols()) != net.bands())
    throw DimensionError("link_rates: power matrix must be links x bands");
  Vec r = Vec::Zero(P.rows());
  for (std::size_t t = 0; t < net.bands(); ++t)
    r.array() += sinr(Vec(P.col(idx(t))), net.gains[t], net.noise).array().log1p();
  return r / static_cast<double>(net.bands());
}

double weighted_sum_rate(const Mat& P, const SisoNetwork& net) { return net.weights.dot(link_rates(P, net)); }

double weighted_sum_rate(const Vec& p, const SisoNetwork& net) { return weighted_sum_rate(as_column(p), net); }

double utility_objective(const Mat& P, const SisoNetwork& net, const std::vector<Utility>& utilities) {
  check_utilities(utilities, net);
  const Vec r = link_rates(P, net);
  double total = 0.0;
  for (std::size_t i = 0; i < net.links(); ++i) total += net.weights[idx(i)] * utilities[i].value(r[idx(i)]);
  return total;
}

Mat utility_gradient(const Mat& P, const SisoNetwork& net, const std::vector<Utility>& utilities) {
  const std::size_t L = net.links();
  const std::size_t T = net.bands();
  const bool plain = utilities.empty();
  if (!plain) check_utilities(utilities, net);
  const Vec r = link_rates(P, net);
  Vec slope = net.weights / static_cast<double>(T);
  if (!plain)
    for (std::size_t i = 0; i < L; ++i) slope[idx(i)] *= utilities[i].derivative(r[idx(i)]);
  Mat grad = Mat::Zero(idx(L), idx(T));
  for (std::size_t t = 0; t < T; ++t) {
    const Mat& G = net.gains[t];
    const Vec p = P.col(idx(t));
    const Vec I = interference(p, G, net.noise);
    const Vec total = I.array() + G.diagonal().array() * p.array();
    for (std::size_t k = 0; k < L; ++k) {
      double g = 0.0;
      for (std::size_t i = 0; i < L; ++i) {
        const double gik = G(idx(i), idx(k));
        g += slope[idx(i)] * gik / total[idx(i)];
        if (i != k) g -= slope[idx(i)] * gik / I[idx(i)];
      }
      grad(idx(k), idx(t)) = g;
    }
  }
  return grad;
}

Vec rate_gradient(const Vec& p, const SisoNetwork& net) { return utility_gradient(as_column(p), net, {}).col(0); }

double foc_residual(const Vec& p, const SisoNetwork& net) {
  const Vec g = rate_gradient(p, net);
  return (p - numerics::project_box(p + g, Vec::Zero(p.size()), Vec::Constant(p.size(), net.p_max))).norm();
}

double multiband_residual(const Mat& P, const SisoNetwork& net) {
  return projected_residual(P, utility_gradient(P, net, {}), net);
}

// ---------------------------------------------------------------------------

Vec direct_y(const Vec& p, const SisoNetwork& net) { return optimal_y(as_column(p), net).col(0); }

namespace {
double surrogate_p(const Vec& p, const Vec& y, const SisoNetwork& net, const std::vector<Utility>* util,
                   Vec* grad) {
  if (p.size() != y.size() || static_cast<std::size_t>(p.size()) != net.links())
    throw DimensionError("surrogate: size mismatch");
  const Mat Q = as_column(p.array().sqrt().matrix());
  Mat gq;
  const double v = surrogate_q(Q, as_column(y), net, util, grad ? &gq : nullptr);
  if (grad) *grad = gq.col(0).array() / (2.0 * Q.col(0).array());
  return v;
}
}  // namespace

double direct_surrogate(const Vec& p, const Vec& y, const SisoNetwork& net) {
  return surrogate_p(p, y, net, nullptr, nullptr);
}

Vec direct_surrogate_gradient(const Vec& p, const Vec& y, const SisoNetwork& net) {
  Vec g;
  surrogate_p(p, y, net, nullptr, &g);
  return g;
}

double utility_surrogate(const Vec& p, const Vec& y, const SisoNetwork& net, const std::vector<Utility>& utilities) {
  check_utilities(utilities, net);
  return surrogate_p(p, y, net, &utilities, nullptr);
}

Vec utility_surrogate_gradient(const Vec& p, const Vec& y, const SisoNetwork& net,
                               const std::vector<Utility>& utilities) {
  check_utilities(utilities, net);
  Vec g;
  surrogate_p(p, y, net, &utilities, &g);
  return g;
}

Vec closed_form_y(const Vec& p, const Vec& gamma, const SisoNetwork& net) {
  const Mat& G = net.gains.front();
  const Vec total = G * p + Vec::Constant(p.size(), net.noise);
  return (net.weights.array() * (1.0 + gamma.array()) * G.diagonal().array() * p.array()).sqrt() / total.array();
}

Vec closed_form_power_raw(const Vec& y, const Vec& gamma, const SisoNetwork& net) {
  const Mat& G = net.gains.front();
  // Receiver i hears transmitter k through G(i, k).
  const Vec den = G.transpose() * y.array().square().matrix();
  const Vec num = y.array().square() * net.weights.array() * (1.0 + gamma.array()) * G.diagonal().array();
  Vec out(y.size());
  for (Eigen::Index k = 0; k < y.size(); ++k)
    out[k] = den[k] > 0.0 ? num[k] / (den[k] * den[k]) : std::numeric_limits<double>::infinity();
  return out;
}

Vec fixed_point_ratio_form(const Vec& p, const Vec& gamma, const SisoNetwork& net) {
  const Mat& G = net.gains.front();
  const Eigen::Index L = p.size();
  const Vec per_rx = net.weights.array() * gamma.array().square() /
                     ((1.0 + gamma.array()) * G.diagonal().array() * p.array());
  const Vec T2 = G.transpose() * per_rx;
  const Vec T1 = net.weights.array() * gamma.array() / p.array().sqrt();
  Vec out(L);
  for (Eigen::Index i = 0; i < L; ++i) out[i] = T1[i] / T2[i] * (T1[i] / T2[i]);
  return out;
}

// ---------------------------------------------------------------------------

Vec default_start(const SisoNetwork& net) { return Vec::Constant(idx(net.links()), 0.5 * net.p_max); }

PcResult pc_direct_solve(const SisoNetwork& net, const Vec& p0, double tol, int max_iters,
                         const numerics::SolverOptions& inner) {
  net.validate();
  if (net.bands() != 1) throw UsageError("pc_direct_solve: single-band network expected");
  check_powers(as_column(p0), net, "pc_direct_solve");
  auto run = run_direct(net, nullptr, as_column(p0), tol, max_iters, inner);
  PcResult out;
  out.p = run.P.col(0);
  out.y = run.Y.col(0);
  out.trace = std::move(run.trace);
  out.converged = run.converged;
  out.residual = run.residual;
  return out;
}

PcResult pc_utility_solve(const SisoNetwork& net, const std::vector<Utility>& utilities, const Vec& p0, double tol,
                          int max_iters, const numerics::SolverOptions& inner) {
  net.validate();
  if (net.bands() != 1) throw UsageError("pc_utility_solve: single-band network expected");
  check_utilities(utilities, net);
  check_powers(as_column(p0), net, "pc_utility_solve");
  auto run = run_direct(net, &utilities, as_column(p0), tol, max_iters, inner);
  PcResult out;
  out.p = run.P.col(0);
  out.y = run.Y.col(0);
  out.trace = std::move(run.trace);
  out.converged = run.converged;
  out.residual = run.residual;
  return out;
}

MultibandResult pc_multiband_solve(const SisoNetwork& net, const Mat& P0, double tol, int max_iters,
                                   const numerics::SolverOptions& inner) {
  net.validate();
  check_powers(P0, net, "pc_multiband_solve");
  auto run = run_direct(net, nullptr, P0, tol, max_iters, inner);
  MultibandResult out;
  out.p = std::move(run.P);
  out.y = std::move(run.Y);
  out.trace = std::move(run.trace);
  out.converged = run.converged;
  out.residual = run.residual;
  return out;
}

PcResult pc_closed_form_solve(const SisoNetwork& net, const Vec& p0, double tol, int max_iters) {
  net.validate();
  if (net.bands() != 1) throw UsageError("pc_closed_form_solve: single-band network expected");
  check_powers(as_column(p0), net, "pc_closed_form_solve");
  if (!(tol > 0.0) || max_iters <= 0) throw UsageError("pc_closed_form_solve: tol and max_iters must be positive");

  PcResult out;
  out.p = p0;
  double f = weighted_sum_rate(out.p, net);
  out.residual = foc_residual(out.p, net);
  out.trace.record(f, out.residual);
  for (int it = 0; it < max_iters; ++it) {
    // gamma first so that y sees the current SINRs.
    out.gamma = sinr(out.p, net);
    out.y = closed_form_y(out.p, out.gamma, net);
    out.p = closed_form_power_raw(out.y, out.gamma, net).cwiseMax(0.0).cwiseMin(net.p_max);
    const double f_new = weighted_sum_rate(out.p, net);
    out.residual = foc_residual(out.p, net);
    out.trace.record(f_new, out.residual);
    const bool settled = objective_settled(f, f_new, tol);
    f = f_new;
    if (settled && out.residual <= 10.0 * tol) {
      out.converged = true;
      break;
    }
  }
  if (out.gamma.size() == 0) {
    out.gamma = sinr(out.p, net);
    out.y = closed_form_y(out.p, out.gamma, net);
  }
  return out;
}

PcResult pc_fixed_point_solve(const SisoNetwork& net, const Vec& p0, int max_iters, double tol) {
  net.validate();
  if (net.bands() != 1) throw UsageError("pc_fixed_point_solve: single-band network expected");
  check_powers(as_column(p0), net, "pc_fixed_point_solve");
  if (!(tol > 0.0) || max_iters <= 0) throw UsageError("pc_fixed_point_solve: tol and max_iters must be positive");
  const Mat& G = net.gains.front();
  const double floor = 1e-12 * net.p_max;

  PcResult out;
  out.p = p0.cwiseMax(floor);
  out.residual = foc_residual(out.p, net);
  out.trace.record(weighted_sum_rate(out.p, net), out.residual);
  for (int it = 0; it < max_iters; ++it) {
    const Vec g = sinr(out.p, net);
    const Vec T1 = net.weights.array() * g.array() / (1.0 + g.array());
    const Vec per_rx =
        net.weights.array() * g.array().square() / ((1.0 + g.array()) * G.diagonal().array() * out.p.array());
    Vec T2 = G.transpose() * per_rx;
    T2 -= G.diagonal().cwiseProduct(per_rx);  // own link excluded
    Vec next(out.p.size());
    for (Eigen::Index i = 0; i < next.size(); ++i)
      next[i] = T2[i] > 0.0 ? std::min(net.p_max, T1[i] / T2[i]) : net.p_max;
    next = next.cwiseMax(floor);
    const double change = (next - out.p).cwiseAbs().maxCoeff();
    out.p = next;
    out.gamma = g;
    out.residual = foc_residual(out.p, net);
    out.trace.record(weighted_sum_rate(out.p, net), out.residual);
    if (change <= tol * net.p_max) {
      out.converged = true;
      break;
    }
  }
  return out;
}

PcResult pc_maxmin_solve(const SisoNetwork& net, const Vec& p0, double tol, int max_iters) {
  net.validate();
  if (net.bands() != 1) throw UsageError("pc_maxmin_solve: single-band network expected");
  check_powers(as_column(p0), net, "pc_maxmin_solve");
  if ((p0.array() <= 0.0).any()) throw DomainError("pc_maxmin_solve: p0 must be strictly positive");
  const Mat G = net.gains.front();
  const Eigen::Index L = G.rows();
  const double noise = net.noise;

  fp::RatioProblem problem;
  problem.combiner = fp::Combiner::MaxMin;
  problem.feasible = fp::FeasibleSet::box(Vec::Zero(L), Vec::Constant(L, net.p_max));
  for (Eigen::Index i = 0; i < L; ++i) {
    fp::RatioTerm term;
    term.numerator = [G, i](const Vec& p) { return G(i, i) * p[i]; };
    term.denominator = [G, i, noise](const Vec& p) { return G.row(i).dot(p) - G(i, i) * p[i] + noise; };
    term.numerator_gradient = [G, i, L](const Vec&) {
      Vec g = Vec::Zero(L);
      g[i] = G(i, i);
      return g;
    };
    term.denominator_gradient = [G, i](const Vec&) {
      Vec g = G.row(i).transpose();
      g[i] = 0.0;
      return g;
    };
    problem.terms.push_back(std::move(term));
  }
  auto res = fp::fp_solve(problem, {}, p0, tol, max_iters);
  PcResult out;
  out.p = res.x;
  out.y = res.aux.scalar;
  out.gamma = sinr(out.p, net);
  out.trace = std::move(res.trace);
  out.converged = res.converged;
  out.residual = out.trace.back().residual;
  return out;
}

}  // namespace fracprog::pc
