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

// Independent reference computations for the tests: exhaustive grids, golden
// section, finite differences. None of these call into the solvers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "fracprog/types.hpp"

namespace oracle {

using fracprog::Vec;

struct Best {
  Vec x;
  double value = -std::numeric_limits<double>::infinity();
};

/// Maximum of f over the box [lo, hi] on a grid of the given step, followed
/// by repeated local grids ten times finer around the incumbent.
inline Best grid_max(const std::function<double(const Vec&)>& f, const Vec& lo, const Vec& hi, double step,
                     int refinements = 4) {
  const Eigen::Index n = lo.size();
  Best best;
  auto scan = [&](const Vec& a, const Vec& b, double h) {
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k)
      counts[static_cast<std::size_t>(k)] = static_cast<Eigen::Index>(std::floor((b[k] - a[k]) / h + 1e-9)) + 1;
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n), 0);
    Vec x(n);
    for (;;) {
      for (Eigen::Index k = 0; k < n; ++k)
        x[k] = std::min(b[k], a[k] + h * static_cast<double>(idx[static_cast<std::size_t>(k)]));
      const double v = f(x);
      if (v > best.value) {
        best.value = v;
        best.x = x;
      }
      Eigen::Index k = 0;
      while (k < n && ++idx[static_cast<std::size_t>(k)] >= counts[static_cast<std::size_t>(k)]) {
        idx[static_cast<std::size_t>(k)] = 0;
        ++k;
      }
      if (k == n) break;
    }
    // Always include the upper corner of each axis.
    for (Eigen::Index k = 0; k < n; ++k) {
      Vec y = best.x;
      y[k] = b[k];
      const double v = f(y);
      if (v > best.value) {
        best.value = v;
        best.x = y;
      }
    }
  };
  scan(lo, hi, step);
  double h = step;
  for (int r = 0; r < refinements; ++r) {
    const Vec a = (best.x.array() - h).max(lo.array());
    const Vec b = (best.x.array() + h).min(hi.array());
    h /= 10.0;
    scan(a, b, h);
  }
  return best;
}

/// Golden-section maximum of a unimodal f on [a, b], endpoints included.
inline Best golden_max(const std::function<double(double)>& f, double a, double b, int iters = 200) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = a, hi = b;
  double c = hi - r * (hi - lo), d = lo + r * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && hi - lo > 0.0; ++i) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - r * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + r * (hi - lo);
      fd = f(d);
    }
  }
  Best best;
  for (double x : {0.5 * (lo + hi), a, b}) {
    const double v = f(x);
    if (v > best.value) {
      best.value = v;
      best.x = Vec::Constant(1, x);
    }
  }
  return best;
}

/// Central-difference gradient.
inline Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  Vec g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec a = x, b = x;
    a[k] += h;
    b[k] -= h;
    g[k] = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace oracle
