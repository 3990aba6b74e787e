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
#include "fracprog/numerics.hpp"
#include "fracprog/trace.hpp"
#include "fracprog/types.hpp"

namespace fracprog::pc {

/// SISO cellular downlink. gains[t](i, j) is the power gain from transmitter j
/// to receiver i in band t; link i pairs transmitter i with receiver i.
struct SisoNetwork {
  std::vector<Mat> gains;
  Vec weights;
  double noise = 1.0;
  double p_max = 1.0;

  std::size_t links() const { return gains.empty() ? 0 : static_cast<std::size_t>(gains.front().rows()); }
  std::size_t bands() const { return gains.size(); }

  /// Throws DimensionError / DomainError on malformed data.
  void validate() const;

  static SisoNetwork single_band(Mat gains, Vec weights, double noise, double p_max);
};

/// Nondecreasing concave utility applied to a link rate.
using Utility = fp::OuterFunction;
Utility identity_utility();
/// ln(r + eps): proportional fairness.
Utility log_utility(double eps);

struct PcResult {
  Vec p;
  Vec y;
  Vec gamma;  // closed-form only
  IterationTrace trace;
  bool converged = false;
  double residual = 0.0;
};

struct MultibandResult {
  Mat p;  // links x bands
  Mat y;
  IterationTrace trace;
  bool converged = false;
  double residual = 0.0;
};

// ---------------------------------------------------------------------------
// Rates

Vec sinr(const Vec& p, const Mat& gains, double noise);
Vec sinr(const Vec& p, const SisoNetwork& net, std::size_t band = 0);

/// Per-link rates in nats; P is links x bands, each band weighted 1/T.
Vec link_rates(const Mat& P, const SisoNetwork& net);

double weighted_sum_rate(const Vec& p, const SisoNetwork& net);
double weighted_sum_rate(const Mat& P, const SisoNetwork& net);

/// Sum of w_i U_i(R_i).
double utility_objective(const Mat& P, const SisoNetwork& net, const std::vector<Utility>& utilities);

/// Gradient of the weighted sum rate (or of the sum utility) in the powers.
Vec rate_gradient(const Vec& p, const SisoNetwork& net);
Mat utility_gradient(const Mat& P, const SisoNetwork& net, const std::vector<Utility>& utilities);

/// Unit-step box-projected gradient residual of the weighted sum rate.
double foc_residual(const Vec& p, const SisoNetwork& net);

/// Same residual for the multi-band problem under the per-transmitter budget.
double multiband_residual(const Mat& P, const SisoNetwork& net);

// ---------------------------------------------------------------------------
// Quadratic-transform surrogates (single band, power coordinates)

/// Optimal transform variables for the direct surrogate.
Vec direct_y(const Vec& p, const SisoNetwork& net);

/// sum_i w_i log(1 + 2 y_i sqrt(g_ii p_i) - y_i^2 (I_i(p) + noise)); -inf off-domain.
double direct_surrogate(const Vec& p, const Vec& y, const SisoNetwork& net);
Vec direct_surrogate_gradient(const Vec& p, const Vec& y, const SisoNetwork& net);

/// sum_i w_i U_i(Q_i) with Q_i the transformed log term.
double utility_surrogate(const Vec& p, const Vec& y, const SisoNetwork& net, const std::vector<Utility>& utilities);
Vec utility_surrogate_gradient(const Vec& p, const Vec& y, const SisoNetwork& net,
                               const std::vector<Utility>& utilities);

/// Transform variables of the closed-form method for given SINR duals.
Vec closed_form_y(const Vec& p, const Vec& gamma, const SisoNetwork& net);

/// Unclamped closed-form power update.
Vec closed_form_power_raw(const Vec& y, const Vec& gamma, const SisoNetwork& net);

/// (T1~ / T2~)^2 with T1~_i = w_i g_i / sqrt(p_i) and
/// T2~_i = sum_j w_j g_j^2 G_ji / ((1 + g_j) G_jj p_j), g = gamma.
Vec fixed_point_ratio_form(const Vec& p, const Vec& gamma, const SisoNetwork& net);

// ---------------------------------------------------------------------------
// Solvers. Iteration stops once the objective change is within tol (relative)
// and the first-order residual is at most 10 tol.

PcResult pc_direct_solve(const SisoNetwork& net, const Vec& p0, double tol, int max_iters,
                         const numerics::SolverOptions& inner = {});

PcResult pc_closed_form_solve(const SisoNetwork& net, const Vec& p0, double tol, int max_iters);

/// Classical fixed-point baseline; non-convergence is reported, not thrown.
/// Stops when the largest power change is within tol * p_max.
PcResult pc_fixed_point_solve(const SisoNetwork& net, const Vec& p0, int max_iters, double tol = 1e-9);

MultibandResult pc_multiband_solve(const SisoNetwork& net, const Mat& P0, double tol, int max_iters,
                                   const numerics::SolverOptions& inner = {});

PcResult pc_utility_solve(const SisoNetwork& net, const std::vector<Utility>& utilities, const Vec& p0, double tol,
                          int max_iters, const numerics::SolverOptions& inner = {});

/// Maximizes the minimum SINR. The trace objective is the minimum SINR.
PcResult pc_maxmin_solve(const SisoNetwork& net, const Vec& p0, double tol, int max_iters);

/// p_max / 2 on every link.
Vec default_start(const SisoNetwork& net);

}  // namespace fracprog::pc
