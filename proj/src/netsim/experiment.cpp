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

#include "fracprog/netsim/experiment.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <json.hpp>

#include "fracprog/beamforming.hpp"
#include "fracprog/energy_efficiency.hpp"
#include "fracprog/netsim/scenario.hpp"
#include "fracprog/netsim/units.hpp"
#include "fracprog/power_control.hpp"

namespace fracprog::netsim {

namespace {

using Clock = std::chrono::steady_clock;

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

std::vector<TraceRow> rows_of(const IterationTrace& trace, const std::function<double(double)>& nats,
                              const std::function<double(double)>& display) {
  std::vector<TraceRow> rows;
  rows.reserve(trace.size());
  for (const auto& r : trace.records())
    rows.push_back({r.iter, nats(r.objective), display(nats(r.objective)), r.residual, r.elapsed.count()});
  return rows;
}

void finish(ExperimentResult& out, const IterationTrace& trace, bool converged, double residual,
            const std::function<double(double)>& nats, const std::function<double(double)>& display) {
  out.trace = rows_of(trace, nats, display);
  auto& s = out.summary;
  s.final_objective = out.trace.back().objective;
  s.final_display = out.trace.back().display;
  s.iterations = trace.iterations();
  s.converged = converged;
  s.residual = residual;
}

const std::function<double(double)> kSame = [](double v) { return v; };

void run_siso(const ScenarioConfig& cfg, numerics::RngStream& rng, ExperimentResult& out) {
  const auto net = generate_siso_hex(cfg, rng);
  auto& s = out.summary;
  s.instance_hash = hex(instance_hash(net));
  s.display_unit = "Mbps";
  const auto mbps = [bw = cfg.bandwidth_hz](double v) { return nats_to_mbps(v, bw); };
  const Eigen::Index L = static_cast<Eigen::Index>(net.links());

  if (net.bands() > 1) {
    const double share = net.p_max / static_cast<double>(net.bands());
    const Mat P0 = Mat::Constant(L, static_cast<Eigen::Index>(net.bands()), share);
    s.extras["baseline_max_power"] = pc::weighted_sum_rate(P0, net);
    const auto res = pc::pc_multiband_solve(net, P0, cfg.tol, cfg.max_iters);
    finish(out, res.trace, res.converged, res.residual, kSame, mbps);
    return;
  }

  const Vec p0 = pc::default_start(net);
  s.extras["baseline_max_power"] = pc::weighted_sum_rate(Vec(Vec::Constant(L, net.p_max)), net);
  if (cfg.algorithm != Algorithm::FixedPoint && cfg.algorithm != Algorithm::MaxMin &&
      cfg.algorithm != Algorithm::Utility) {
    const auto fpb = pc::pc_fixed_point_solve(net, p0, cfg.max_iters);
    s.extras["baseline_fixed_point"] = fpb.trace.back().objective;
    s.extras["baseline_fixed_point_converged"] = fpb.converged ? 1.0 : 0.0;
  }
  switch (cfg.algorithm) {
    case Algorithm::Direct: {
      const auto r = pc::pc_direct_solve(net, p0, cfg.tol, cfg.max_iters);
      finish(out, r.trace, r.converged, r.residual, kSame, mbps);
      break;
    }
    case Algorithm::Closed: {
      const auto r = pc::pc_closed_form_solve(net, p0, cfg.tol, cfg.max_iters);
      finish(out, r.trace, r.converged, r.residual, kSame, mbps);
      break;
    }
    case Algorithm::FixedPoint: {
      const auto r = pc::pc_fixed_point_solve(net, p0, cfg.max_iters, cfg.tol);
      finish(out, r.trace, r.converged, r.residual, kSame, mbps);
      break;
    }
    case Algorithm::MaxMin: {
      // Trace objective is the minimum SINR; report it as the minimum rate.
      const auto r = pc::pc_maxmin_solve(net, p0, cfg.tol, cfg.max_iters);
      finish(out, r.trace, r.converged, r.residual, [](double g) { return std::log1p(g); }, mbps);
      s.display_unit = "Mbps (minimum link)";
      break;
    }
    case Algorithm::Utility: {
      const std::vector<pc::Utility> u(net.links(), pc::log_utility(1e-6));
      const auto r = pc::pc_utility_solve(net, u, p0, cfg.tol, cfg.max_iters);
      finish(out, r.trace, r.converged, r.residual, kSame, kSame);
      s.display_unit = "sum log-rate";
      s.extras["sum_rate_nats"] = pc::weighted_sum_rate(r.p, net);
      break;
    }
    default:
      throw UsageError("solver.algorithm: not available for siso_hex");
  }
}

void run_mimo(const ScenarioConfig& cfg, numerics::RngStream& rng, ExperimentResult& out) {
  const auto net = generate_mimo_hex(cfg, rng);
  auto& s = out.summary;
  s.instance_hash = hex(instance_hash(net));
  s.display_unit = "Mbps";
  const auto mbps = [bw = cfg.bandwidth_hz](double v) { return nats_to_mbps(v, bw); };
  const auto V0 = bf::default_start(net);
  s.extras["baseline_initial"] = bf::weighted_sum_rate(V0, net);
  const auto r = cfg.algorithm == Algorithm::Direct ? bf::bf_direct_solve(net, V0, cfg.tol, cfg.max_iters)
                                                    : bf::bf_closed_form_solve(net, V0, cfg.tol, cfg.max_iters);
  finish(out, r.trace, r.converged, r.residual, kSame, mbps);
}

void run_ee_single(const ScenarioConfig& cfg, ExperimentResult& out) {
  const auto link = generate_ee_single(cfg);
  auto& s = out.summary;
  s.instance_hash = hex(instance_hash(link));
  s.display_unit = "Mbit/J";
  const auto mbit = [bw = cfg.bandwidth_hz](double v) { return nats_to_mbps(v, bw); };
  const auto r = cfg.algorithm == Algorithm::Dinkelbach
                     ? ee::ee_single_link_dinkelbach(link, link.p_max, cfg.tol, cfg.max_iters)
                     : ee::ee_single_link_qt(link, link.p_max, cfg.tol, cfg.max_iters);
  finish(out, r.trace, r.converged, r.trace.back().residual, kSame, mbit);
  s.extras["optimal_power_w"] = r.p;
}

void run_ee_broadcast(const ScenarioConfig& cfg, numerics::RngStream& rng, ExperimentResult& out) {
  const auto net = generate_ee_broadcast(cfg, rng);
  auto& s = out.summary;
  s.instance_hash = hex(instance_hash(net));
  s.display_unit = "Mbit/J";
  const auto mbit = [bw = cfg.bandwidth_hz](double v) { return nats_to_mbps(v, bw); };
  // Equal power over random directions.
  bf::Beamformers V0;
  const double amp = std::sqrt(net.p_max / static_cast<double>(net.receivers()));
  for (std::size_t m = 0; m < net.receivers(); ++m) {
    CVec v(static_cast<Eigen::Index>(net.tx_antennas()));
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = rng.complex_normal();
    V0.push_back(amp * v / v.norm());
  }
  const auto method = cfg.algorithm == Algorithm::Dinkelbach ? ee::BroadcastMethod::Dinkelbach
                                                              : ee::BroadcastMethod::Nested;
  const auto r = ee::ee_broadcast_solve(net, method, V0, cfg.tol, cfg.max_iters);
  finish(out, r.trace, r.converged, r.residual, kSame, mbit);
  s.extras["initial_ee"] = r.trace[0].objective;
  if (r.trace[0].objective > 0.0) s.extras["improvement_factor"] = r.trace.back().objective / r.trace[0].objective;
}

void run_textbook(const ScenarioConfig& cfg, ExperimentResult& out) {
  auto& s = out.summary;
  s.instance_hash = hex(0);
  s.display_unit = "ratio";
  out.qt_rate = qt_rate_fixture(0.1, 60);
  out.dinkelbach_rate = dinkelbach_rate_fixture(2.0, 1e-15, 50);
  Vec x0(2);
  x0 << 0.5, 0.5;
  const auto r = fig1_solve(x0, cfg.tol, cfg.max_iters);
  finish(out, r.trace, r.converged, r.trace.back().residual, kSame, kSame);
  s.extras["fig1_x1"] = r.x[0];
  s.extras["fig1_x2"] = r.x[1];
  s.extras["qt_ratio_last"] = out.qt_rate.back().ratio;
  s.extras["dinkelbach_iterations"] = static_cast<double>(out.dinkelbach_rate.size() - 1);
}

}  // namespace

ExperimentResult execute(const ScenarioConfig& cfg) {
  cfg.validate();
  numerics::RngStream rng(cfg.seed);
  ExperimentResult out;
  auto& s = out.summary;
  s.scenario = to_string(cfg.kind);
  s.algorithm = to_string(cfg.algorithm);
  s.seed = cfg.seed;
  const auto start = Clock::now();
  switch (cfg.kind) {
    case ScenarioKind::SisoHex:
      run_siso(cfg, rng, out);
      break;
    case ScenarioKind::MimoHex:
      run_mimo(cfg, rng, out);
      break;
    case ScenarioKind::EeSingle:
      run_ee_single(cfg, out);
      break;
    case ScenarioKind::EeBroadcast:
      run_ee_broadcast(cfg, rng, out);
      break;
    case ScenarioKind::Textbook:
      run_textbook(cfg, out);
      break;
  }
  s.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

RunSummary run_experiment(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
  auto result = execute(cfg);
  std::filesystem::create_directories(out_dir);
  result.summary.trace_file = "trace.csv";
  write_trace_csv(out_dir / "trace.csv", result.trace);
  if (cfg.kind == ScenarioKind::Textbook) {
    write_rate_csv(out_dir / "rate.csv", result.qt_rate);
    write_rate_csv(out_dir / "dinkelbach.csv", result.dinkelbach_rate);
  }
  write_summary_json(out_dir / "summary.json", result.summary);
  return result.summary;
}

namespace {
std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& rows) {
  auto f = open_out(path);
  f << "iter,objective_nats,objective_display,residual,elapsed_ms\n";
  for (const auto& r : rows)
    f << r.iter << ',' << num(r.objective) << ',' << num(r.display) << ',' << num(r.residual) << ','
      << num(r.elapsed_ms) << '\n';
}

void write_rate_csv(const std::filesystem::path& path, const std::vector<RateRow>& rows) {
  auto f = open_out(path);
  f << "iter,y,error,error_ratio\n";
  for (const auto& r : rows) f << r.iter << ',' << num(r.y) << ',' << num(r.error) << ',' << num(r.ratio) << '\n';
}

void write_summary_json(const std::filesystem::path& path, const RunSummary& s) {
  nlohmann::ordered_json j;
  j["scenario"] = s.scenario;
  j["algorithm"] = s.algorithm;
  j["seed"] = s.seed;
  j["instance_hash"] = s.instance_hash;
  j["final_objective"] = s.final_objective;
  j["final_display"] = s.final_display;
  j["display_unit"] = s.display_unit;
  j["iterations"] = s.iterations;
  j["wall_ms"] = s.wall_ms;
  j["converged"] = s.converged;
  j["residual"] = s.residual;
  j["trace_file"] = s.trace_file;
  nlohmann::ordered_json extras = nlohmann::ordered_json::object();
  for (const auto& [k, v] : s.extras) extras[k] = v;
  j["extras"] = extras;
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

}  // namespace fracprog::netsim
