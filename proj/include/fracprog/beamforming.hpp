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

#include "fracprog/numerics.hpp"
#include "fracprog/trace.hpp"
#include "fracprog/types.hpp"

namespace fracprog::bf {

/// MIMO cellular downlink with a fixed number of streams per cell. Stream s
/// belongs to cell s / streams_per_cell. channels[s][j] is the N x M channel
/// from BS j to the receiver of stream s.
struct MimoNetwork {
  std::size_t cells = 0;
  std::size_t streams_per_cell = 0;
  std::size_t tx_antennas = 0;  // M
  std::size_t rx_antennas = 0;  // N
  std::vector<std::vector<CMat>> channels;
  Vec weights;
  double noise = 1.0;
  double p_max = 1.0;

  std::size_t streams() const { return cells * streams_per_cell; }
  std::size_t bs_of(std::size_t s) const { return s / streams_per_cell; }

  void validate() const;
};

/// One transmit beamformer per stream.
using Beamformers = std::vector<CVec>;

struct BfResult {
  Beamformers V;
  std::vector<CVec> y;
  Vec gamma;  // closed-form only
  Vec eta;    // closed-form only, one per BS
  IterationTrace trace;
  bool converged = false;
  double residual = 0.0;
};

/// Interference-plus-noise covariance seen by stream s; own stream included on request.
CMat covariance(const Beamformers& V, const MimoNetwork& net, std::size_t s, bool include_own);

/// Per-stream SINR v^H H^H C^{-1} H v with C the leave-own-out covariance.
Vec stream_sinr(const Beamformers& V, const MimoNetwork& net);
/// Per-stream rates ln(1 + SINR).
Vec stream_rates(const Beamformers& V, const MimoNetwork& net);
double weighted_sum_rate(const Beamformers& V, const MimoNetwork& net);

/// Per-BS transmit power.
Vec bs_power(const Beamformers& V, const MimoNetwork& net);
bool feasible(const Beamformers& V, const MimoNetwork& net, double tol = 1e-12);

/// Transform variables of the direct method (leave-own-out covariance).
std::vector<CVec> direct_y(const Beamformers& V, const MimoNetwork& net);

/// sum_s w_s log(1 + 2 Re{y_s^H H v_s} - y_s^H C_s y_s); -inf off-domain.
double direct_surrogate(const Beamformers& V, const std::vector<CVec>& Y, const MimoNetwork& net);
/// Wirtinger gradient d/d conj(v_s) of the direct surrogate.
Beamformers direct_surrogate_gradient(const Beamformers& V, const std::vector<CVec>& Y, const MimoNetwork& net);

/// Unit-step projected gradient residual of the weighted sum rate over the
/// real-equivalent variables under the per-BS budgets.
double kkt_residual(const Beamformers& V, const MimoNetwork& net);

/// Transform variables of the closed-form method: full covariance, scaled.
std::vector<CVec> closed_form_y(const Beamformers& V, const Vec& gamma, const MimoNetwork& net);

/// The per-BS quadratic system behind the closed-form V-step:
/// v_s(eta) = (eta I + A)^{-1} b_s for the streams of one BS.
struct BsSystem {
  CMat A;
  std::vector<CVec> b;
};
BsSystem closed_form_system(const MimoNetwork& net, const std::vector<CVec>& Y, const Vec& gamma, std::size_t bs);
/// Beamformers of one BS for a multiplier eta; throws ConditioningError if
/// eta I + A is singular.
std::vector<CVec> beamformers_at(const BsSystem& sys, double eta);
/// sum_s ||v_s(eta)||^2 - p_max; +inf where eta I + A is singular.
double eta_power(double eta, const BsSystem& sys, double p_max);
/// Smallest eta >= 0 meeting the budget (0 when the unconstrained solution fits).
double solve_eta(const BsSystem& sys, double p_max);

BfResult bf_direct_solve(const MimoNetwork& net, const Beamformers& V0, double tol, int max_iters,
                         const numerics::SolverOptions& inner = {});
BfResult bf_closed_form_solve(const MimoNetwork& net, const Beamformers& V0, double tol, int max_iters);

/// Dominant right singular direction of the own channel, per-BS power split
/// equally over its streams.
Beamformers default_start(const MimoNetwork& net);

/// Real-equivalent packing used by the direct solver: per stream, real parts then imaginary parts.
Vec pack(const Beamformers& V);
Beamformers unpack(const Vec& x, const MimoNetwork& net);

}  // namespace fracprog::bf
