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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fracprog {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

/// Input outside the mathematical domain of an operation (negative numerator,
/// nonpositive denominator, infeasible start, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A matrix that should be Hermitian positive definite failed to factor.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation invoked with arguments that make no sense for it (wrong number
/// of terms, unsupported algorithm for a problem class, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bisection could not bracket a sign change.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension mismatch between arguments.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace fracprog
