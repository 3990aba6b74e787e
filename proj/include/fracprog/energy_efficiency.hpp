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

#include "fracprog/beamforming.hpp"
#include "fracprog/numerics.hpp"
#include "fracprog/trace.hpp"
#include "fracprog/types.hpp"

namespace fracprog::ee {

struct SingleLink {
  double gain = 1.0;  // |h|^2
  double noise = 1.0;
  double p_max = 1.0;
  double p_on = 1.0;

  void validate() const;
};

/// One sender with M antennas serving one stream to each receiver.
struct BroadcastNetwork {
  std::vector<CMat> channels;  // N x M per receiver
  double noise = 1.0;
  double p_max = 1.0;
  double p_on = 1.0;

  std::size_t receivers() const { return channels.size(); }
  std::size_t tx_antennas() const { return channels.empty() ? 0 : static_cast<std::size_t>(channels.front().cols()); }

  void validate() const;
  /// Same channels viewed as a one-cell network with unit weights.
  bf::MimoNetwork as_mimo() const;
};

struct SingleLinkResult {
  double p = 0.0;
  double y = 0.0;
  IterationTrace trace;
  bool converged = false;
};

struct BroadcastResult {
  bf::Beamformers V;
  double y = 0.0;
  std::vector<CVec> z;
  IterationTrace trace;
  bool converged = false;
  double residual = 0.0;
};

enum class BroadcastMethod { Nested, Dinkelbach };

/// ln(1 + gain p / noise) / (p + p_on).
double ee_objective(double p, const SingleLink& link);
/// sum_m R_m(V) / (sum_m ||v_m||^2 + p_on).
double ee_objective(const bf::Beamformers& V, const BroadcastNetwork& net);

/// Maximizer over [0, p_max] of 2 y sqrt(ln(1 + a p)) - y^2 (p + p_on).
double qt_power_step(double y, const SingleLink& link);
/// Maximizer over [0, p_max] of ln(1 + a p) - y (p + p_on).
double dinkelbach_power_step(double y, const SingleLink& link);

/// Both single-link solvers stop when the efficiency changes by at most
/// tol (relative). Starting from p0 = 0 on a live channel is a degenerate
/// fixed point of the quadratic transform (y = 0); use p0 > 0.
SingleLinkResult ee_single_link_qt(const SingleLink& link, double p0, double tol, int max_iters);
SingleLinkResult ee_single_link_dinkelbach(const SingleLink& link, double p0, double tol, int max_iters);

/// Optimal outer variable for the nested transform.
double nested_y(const bf::Beamformers& V, const BroadcastNetwork& net);

/// 2 y sqrt(sum_m log u_m) - y^2 (sum ||v_m||^2 + p_on); -inf when a log
/// argument or the rate sum is not positive.
double nested_surrogate(const bf::Beamformers& V, double y, const std::vector<CVec>& Z, const BroadcastNetwork& net);
/// Wirtinger gradient d/d conj(v_m) of the nested surrogate.
bf::Beamformers nested_surrogate_gradient(const bf::Beamformers& V, double y, const std::vector<CVec>& Z,
                                          const BroadcastNetwork& net);

/// Unit-step projected gradient residual of the efficiency under the budget.
double ee_residual(const bf::Beamformers& V, const BroadcastNetwork& net);

/// Nested quadratic transform. V0 must be feasible and not all zero.
BroadcastResult ee_nested_solve(const BroadcastNetwork& net, const bf::Beamformers& V0, double tol, int max_iters,
                                const numerics::SolverOptions& inner = {});

/// Dispatch by method. Dinkelbach is refused: the subtractive form is not
/// concave in V, so its inner step has no reliable solver.
BroadcastResult ee_broadcast_solve(const BroadcastNetwork& net, BroadcastMethod method, const bf::Beamformers& V0,
                                   double tol, int max_iters);

}  // namespace fracprog::ee
