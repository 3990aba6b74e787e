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

#include "fracprog/beamforming.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracprog/trace.hpp"

namespace fracprog::bf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::Index ei(std::size_t i) { return static_cast<Eigen::Index>(i); }

const CMat& own_channel(const MimoNetwork& net, std::size_t s) { return net.channels[s][net.bs_of(s)]; }

numerics::Groups bs_groups(const MimoNetwork& net) {
  const std::size_t width = 2 * net.tx_antennas;
  numerics::Groups groups(net.cells);
  for (std::size_t s = 0; s < net.streams(); ++s)
    for (std::size_t k = 0; k < width; ++k) groups[net.bs_of(s)].push_back(s * width + k);
  return groups;
}

void check_beamformers(const Beamformers& V, const MimoNetwork& net, const char* who) {
  if (V.size() != net.streams()) throw DimensionError(std::string(who) + ": one beamformer per stream");
  for (const auto& v : V) {
    if (static_cast<std::size_t>(v.size()) != net.tx_antennas)
      throw DimensionError(std::string(who) + ": beamformer length must equal the BS antenna count");
    if (!v.allFinite()) throw DomainError(std::string(who) + ": beamformer not finite");
  }
}

bool settled_and_stationary(double f_prev, double f, double residual, double tol) {
  return objective_settled(f_prev, f, tol) && residual <= 10.0 * tol;
}

}  // namespace

void MimoNetwork::validate() const {
  if (cells == 0 || streams_per_cell == 0 || tx_antennas == 0 || rx_antennas == 0)
    throw DimensionError("MimoNetwork: all dimensions must be positive");
  if (channels.size() != streams()) throw DimensionError("MimoNetwork: one channel row per stream");
  for (const auto& row : channels) {
    if (row.size() != cells) throw DimensionError("MimoNetwork: one channel per BS");
    for (const auto& H : row) {
      if (static_cast<std::size_t>(H.rows()) != rx_antennas || static_cast<std::size_t>(H.cols()) != tx_antennas)
        throw DimensionError("MimoNetwork: channel matrices must be N x M");
      if (!H.allFinite()) throw DomainError("MimoNetwork: channel not finite");
    }
  }
  if (static_cast<std::size_t>(weights.size()) != streams())
    throw DimensionError("MimoNetwork: one weight per stream");
  if ((weights.array() < 0.0).any()) throw DomainError("MimoNetwork: weights must be >= 0");
  if (!(noise > 0.0) || !std::isfinite(noise)) throw DomainError("MimoNetwork: noise must be positive");
  if (!(p_max > 0.0) || !std::isfinite(p_max)) throw DomainError("MimoNetwork: p_max must be positive");
}

// ---------------------------------------------------------------------------

CMat covariance(const Beamformers& V, const MimoNetwork& net, std::size_t s, bool include_own) {
  const Eigen::Index N = ei(net.rx_antennas);
  CMat C = CMat::Identity(N, N) * net.noise;
  for (std::size_t k = 0; k < net.streams(); ++k) {
    if (k == s && !include_own) continue;
    const CVec h = net.channels[s][net.bs_of(k)] * V[k];
    C.noalias() += h * h.adjoint();
  }
  return C;
}

Vec stream_sinr(const Beamformers& V, const MimoNetwork& net) {
  check_beamformers(V, net, "stream_sinr");
  Vec g(ei(net.streams()));
  for (std::size_t s = 0; s < net.streams(); ++s) {
    const CVec h = own_channel(net, s) * V[s];
    g[ei(s)] = std::max(0.0, std::real(h.dot(numerics::hpd_solve(covariance(V, net, s, false), h))));
  }
  return g;
}

Vec stream_rates(const Beamformers& V, const MimoNetwork& net) { return stream_sinr(V, net).array().log1p(); }

double weighted_sum_rate(const Beamformers& V, const MimoNetwork& net) {
  return net.weights.dot(stream_rates(V, net));
}

Vec bs_power(const Beamformers& V, const MimoNetwork& net) {
  Vec p = Vec::Zero(ei(net.cells));
  for (std::size_t s = 0; s < V.size(); ++s) p[ei(net.bs_of(s))] += V[s].squaredNorm();
  return p;
}

bool feasible(const Beamformers& V, const MimoNetwork& net, double tol) {
  return (bs_power(V, net).array() <= net.p_max * (1.0 + tol)).all();
}

std::vector<CVec> direct_y(const Beamformers& V, const MimoNetwork& net) {
  std::vector<CVec> Y;
  Y.reserve(net.streams());
  for (std::size_t s = 0; s < net.streams(); ++s)
    Y.push_back(numerics::hpd_solve(covariance(V, net, s, false), own_channel(net, s) * V[s]));
  return Y;
}

namespace {
// Log arguments u_s of the direct surrogate; false when any is <= 0.
bool log_arguments(const Beamformers& V, const std::vector<CVec>& Y, const MimoNetwork& net, Vec& u) {
  u.resize(ei(net.streams()));
  for (std::size_t s = 0; s < net.streams(); ++s) {
    const CVec h = own_channel(net, s) * V[s];
    const CMat C = covariance(V, net, s, false);
    u[ei(s)] = 1.0 + 2.0 * std::real(Y[s].dot(h)) - std::real(Y[s].dot(C * Y[s]));
    if (!(u[ei(s)] > 0.0)) return false;
  }
  return true;
}
}  // namespace

double direct_surrogate(const Beamformers& V, const std::vector<CVec>& Y, const MimoNetwork& net) {
  Vec u;
  if (!log_arguments(V, Y, net, u)) return kNegInf;
  return net.weights.dot(Vec(u.array().log()));
}

Beamformers direct_surrogate_gradient(const Beamformers& V, const std::vector<CVec>& Y, const MimoNetwork& net) {
  Vec u;
  if (!log_arguments(V, Y, net, u)) throw DomainError("direct_surrogate_gradient: outside the surrogate domain");
  const std::size_t S = net.streams();
  Beamformers G(S);
  for (std::size_t l = 0; l < S; ++l) {
    const std::size_t j = net.bs_of(l);
    G[l] = net.weights[ei(l)] / u[ei(l)] * (net.channels[l][j].adjoint() * Y[l]);
    for (std::size_t s = 0; s < S; ++s) {
      if (s == l) continue;
      const CVec c = net.channels[s][j].adjoint() * Y[s];
      G[l] -= net.weights[ei(s)] / u[ei(s)] * c * c.dot(V[l]);
    }
  }
  return G;
}

Vec pack(const Beamformers& V) {
  Eigen::Index M = V.empty() ? 0 : V.front().size();
  Vec x(static_cast<Eigen::Index>(V.size()) * 2 * M);
  for (std::size_t s = 0; s < V.size(); ++s) {
    x.segment(ei(s) * 2 * M, M) = V[s].real();
    x.segment(ei(s) * 2 * M + M, M) = V[s].imag();
  }
  return x;
}

Beamformers unpack(const Vec& x, const MimoNetwork& net) {
  const Eigen::Index M = ei(net.tx_antennas);
  if (x.size() != ei(net.streams()) * 2 * M) throw DimensionError("unpack: wrong length");
  Beamformers V(net.streams());
  for (std::size_t s = 0; s < net.streams(); ++s) {
    V[s].resize(M);
    V[s].real() = x.segment(ei(s) * 2 * M, M);
    V[s].imag() = x.segment(ei(s) * 2 * M + M, M);
  }
  return V;
}

double kkt_residual(const Beamformers& V, const MimoNetwork& net) {
  // At the optimal y the surrogate gradient equals the rate gradient.
  const auto Y = direct_y(V, net);
  const Vec g = 2.0 * pack(direct_surrogate_gradient(V, Y, net));
  const Vec x = pack(V);
  const std::vector<double> radii(net.cells, std::sqrt(net.p_max));
  return (x - numerics::project_group_ball<Vec>(x + g, bs_groups(net), radii)).norm();
}

// ---------------------------------------------------------------------------

std::vector<CVec> closed_form_y(const Beamformers& V, const Vec& gamma, const MimoNetwork& net) {
  std::vector<CVec> Y;
  Y.reserve(net.streams());
  for (std::size_t s = 0; s < net.streams(); ++s) {
    const double scale = std::sqrt(net.weights[ei(s)] * (1.0 + gamma[ei(s)]));
    Y.push_back(numerics::hpd_solve(covariance(V, net, s, true), scale * (own_channel(net, s) * V[s])));
  }
  return Y;
}

BsSystem closed_form_system(const MimoNetwork& net, const std::vector<CVec>& Y, const Vec& gamma, std::size_t bs) {
  const Eigen::Index M = ei(net.tx_antennas);
  BsSystem sys;
  sys.A = CMat::Zero(M, M);
  for (std::size_t k = 0; k < net.streams(); ++k) {
    const CVec c = net.channels[k][bs].adjoint() * Y[k];
    sys.A.noalias() += c * c.adjoint();
  }
  for (std::size_t s = bs * net.streams_per_cell; s < (bs + 1) * net.streams_per_cell; ++s) {
    const double scale = std::sqrt(net.weights[ei(s)] * (1.0 + gamma[ei(s)]));
    sys.b.push_back(scale * (net.channels[s][bs].adjoint() * Y[s]));
  }
  return sys;
}

std::vector<CVec> beamformers_at(const BsSystem& sys, double eta) {
  if (!(eta >= 0.0)) throw DomainError("beamformers_at: eta must be nonnegative");
  CMat K = sys.A;
  K.diagonal().array() += eta;
  std::vector<CVec> out;
  out.reserve(sys.b.size());
  for (const auto& b : sys.b) out.push_back(numerics::hpd_solve(K, b));
  return out;
}

double eta_power(double eta, const BsSystem& sys, double p_max) {
  try {
    double total = 0.0;
    for (const auto& v : beamformers_at(sys, eta)) total += v.squaredNorm();
    return total - p_max;
  } catch (const ConditioningError&) {
    return std::numeric_limits<double>::infinity();
  }
}

double solve_eta(const BsSystem& sys, double p_max) {
  return numerics::bisection_root([&](double eta) { return eta_power(eta, sys, p_max); }, 0.0, 1.0,
                                  std::numeric_limits<double>::min());
}

// ---------------------------------------------------------------------------

Beamformers default_start(const MimoNetwork& net) {
  net.validate();
  const double amp = std::sqrt(net.p_max / static_cast<double>(net.streams_per_cell));
  Beamformers V;
  V.reserve(net.streams());
  for (std::size_t s = 0; s < net.streams(); ++s) {
    Eigen::JacobiSVD<CMat> svd(own_channel(net, s), Eigen::ComputeFullV);
    V.push_back(amp * svd.matrixV().col(0));
  }
  return V;
}

BfResult bf_direct_solve(const MimoNetwork& net, const Beamformers& V0, double tol, int max_iters,
                         const numerics::SolverOptions& inner) {
  net.validate();
  check_beamformers(V0, net, "bf_direct_solve");
  if (!feasible(V0, net)) throw DomainError("bf_direct_solve: V0 violates a power budget");
  if (!(tol > 0.0) || max_iters <= 0) throw UsageError("bf_direct_solve: tol and max_iters must be positive");
  inner.validate();
  const auto groups = bs_groups(net);
  const std::vector<double> radii(net.cells, std::sqrt(net.p_max));

  BfResult out;
  out.V = V0;
  double f = weighted_sum_rate(out.V, net);
  out.residual = kkt_residual(out.V, net);
  out.trace.record(f, out.residual);
  for (int it = 0; it < max_iters; ++it) {
    const auto Y = direct_y(out.V, net);
    auto value = [&](const Vec& x) { return direct_surrogate(unpack(x, net), Y, net); };
    auto gradient = [&](const Vec& x) { return Vec(2.0 * pack(direct_surrogate_gradient(unpack(x, net), Y, net))); };
    auto project = [&](const Vec& x) { return numerics::project_group_ball<Vec>(x, groups, radii); };
    const auto res = numerics::projected_gradient_maximize<Vec>(value, gradient, project, pack(out.V), inner);
    out.V = unpack(res.x, net);
    out.y = Y;
    const double f_new = weighted_sum_rate(out.V, net);
    out.residual = kkt_residual(out.V, net);
    out.trace.record(f_new, out.residual);
    const bool done = settled_and_stationary(f, f_new, out.residual, tol);
    f = f_new;
    if (done) {
      out.converged = true;
      break;
    }
  }
  if (out.y.empty()) out.y = direct_y(out.V, net);
  return out;
}

BfResult bf_closed_form_solve(const MimoNetwork& net, const Beamformers& V0, double tol, int max_iters) {
  net.validate();
  check_beamformers(V0, net, "bf_closed_form_solve");
  if (!feasible(V0, net)) throw DomainError("bf_closed_form_solve: V0 violates a power budget");
  if (!(tol > 0.0) || max_iters <= 0) throw UsageError("bf_closed_form_solve: tol and max_iters must be positive");
  const Eigen::Index M = ei(net.tx_antennas);

  BfResult out;
  out.V = V0;
  out.eta = Vec::Zero(ei(net.cells));
  double f = weighted_sum_rate(out.V, net);
  out.residual = kkt_residual(out.V, net);
  out.trace.record(f, out.residual);
  for (int it = 0; it < max_iters; ++it) {
    // gamma first, then y with the fresh gamma.
    out.gamma = stream_sinr(out.V, net);
    out.y = closed_form_y(out.V, out.gamma, net);
    for (std::size_t i = 0; i < net.cells; ++i) {
      const BsSystem sys = closed_form_system(net, out.y, out.gamma, i);
      const bool silent = std::all_of(sys.b.begin(), sys.b.end(), [](const CVec& b) { return b.isZero(0.0); });
      std::vector<CVec> v;
      if (silent) {
        out.eta[ei(i)] = 0.0;
        v.assign(sys.b.size(), CVec::Zero(M));
      } else {
        out.eta[ei(i)] = solve_eta(sys, net.p_max);
        v = beamformers_at(sys, out.eta[ei(i)]);
      }
      for (std::size_t m = 0; m < v.size(); ++m) out.V[i * net.streams_per_cell + m] = std::move(v[m]);
    }
    const double f_new = weighted_sum_rate(out.V, net);
    out.residual = kkt_residual(out.V, net);
    out.trace.record(f_new, out.residual);
    const bool done = settled_and_stationary(f, f_new, out.residual, tol);
    f = f_new;
    if (done) {
      out.converged = true;
      break;
    }
  }
  if (out.gamma.size() == 0) {
    out.gamma = stream_sinr(out.V, net);
    out.y = closed_form_y(out.V, out.gamma, net);
  }
  return out;
}

}  // namespace fracprog::bf
