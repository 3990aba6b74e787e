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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <vector>

namespace fracprog {

struct TraceRecord {
  std::size_t iter = 0;
  double objective = 0.0;
  double residual = 0.0;
  std::chrono::duration<double, std::milli> elapsed{0.0};
};

/// Per-iteration history of an outer solver loop. Record 0 is the starting
/// point; record t is the state after the t-th outer iteration.
class IterationTrace {
 public:
  using clock = std::chrono::steady_clock;

  IterationTrace() : start_(clock::now()) {}

  void record(double objective, double residual) {
    records_.push_back({records_.size(), objective, residual, clock::now() - start_});
  }

  const std::vector<TraceRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const TraceRecord& back() const { return records_.back(); }
  const TraceRecord& operator[](std::size_t i) const { return records_[i]; }

  /// Number of outer iterations performed (records minus the start record).
  std::size_t iterations() const { return records_.empty() ? 0 : records_.size() - 1; }

  /// True when no record falls below its predecessor by more than
  /// rel_tol times the larger magnitude of the two.
  bool nondecreasing(double rel_tol) const {
    for (std::size_t t = 1; t < records_.size(); ++t) {
      const double prev = records_[t - 1].objective;
      const double cur = records_[t].objective;
      const double slack = rel_tol * std::max(std::abs(prev), std::abs(cur));
      if (cur < prev - slack) return false;
    }
    return true;
  }

 private:
  clock::time_point start_;
  std::vector<TraceRecord> records_;
};

/// Relative objective-change stopping rule: |f_t - f_{t-1}| <= tol * (1 + |f_t|).
inline bool objective_settled(double prev, double cur, double tol) {
  return std::abs(cur - prev) <= tol * (1.0 + std::abs(cur));
}

}  // namespace fracprog
