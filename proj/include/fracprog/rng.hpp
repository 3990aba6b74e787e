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

#include <cstdint>
#include <random>

#include "fracprog/types.hpp"

namespace fracprog::numerics {

/// Seeded random stream. The engine is mt19937_64, whose output sequence is
/// fixed by the standard; the uniform and Gaussian transforms are implemented
/// here rather than taken from <random> distributions, whose algorithms are
/// implementation-defined. Same seed, same samples, on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }

  std::uint64_t next_u64() {
    ++draws_;
    return engine_();
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; one spare value is cached.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Circularly symmetric complex Gaussian with E|z|^2 = 1.
  cplx complex_normal();

  /// Independent stream derived from this one's seed and an index.
  RngStream split(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fracprog::numerics
