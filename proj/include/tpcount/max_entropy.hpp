/*
 * Copyright 2026 The tpcount Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <span>

#include <Eigen/Dense>

#include "tpcount/errors.hpp"
#include "tpcount/polytope.hpp"

namespace tpcount {

struct SolverOptions {
  /// Stop once ||Az - b||_inf <= tol * max(1, ||b||_inf).
  double tol = 1e-10;
  int max_iters = 200;
};

/// Maximum-entropy point of the polytope together with its dual certificate.
struct MaxEntropySolution {
  Mode mode = Mode::Integer;
  /// Cell means zeta_j, flat cell order.
  Eigen::VectorXd z;
  /// Multipliers on the K rows; zero on the rows removed from L.
  Eigen::VectorXd lambda;
  double gz = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
};

/// sum_j (x_j + 1) ln(x_j + 1) - x_j ln x_j, with 0 ln 0 = 0. Throws
/// NegativeEntry.
double entropy_geometric(std::span<const double> x);

/// sum_j x_j ln(1/x_j) + (1 - x_j) ln(1/(1 - x_j)). Throws OutOfRange when
/// some x_j lies outside [0, 1].
double entropy_bernoulli(std::span<const double> x);

inline double entropy(Mode mode, const Eigen::VectorXd& x) {
  std::span<const double> view(x.data(), static_cast<std::size_t>(x.size()));
  return mode == Mode::Integer ? entropy_geometric(view) : entropy_bernoulli(view);
}

/// Stationarity map: cell means produced by the multipliers. Geometric mode
/// solves ln(1 + 1/zeta) = <a_j, lambda>, Bernoulli mode
/// ln((1 - zeta)/zeta) = <a_j, lambda>.
Eigen::VectorXd means_from_multipliers(const ConstraintSystem& cs, Mode mode,
                                       const Eigen::VectorXd& lambda);

/// Dual objective <b, lambda> + sum_j psi(<a_j, lambda>); its minimum equals
/// the maximum entropy. Returns +inf outside the geometric domain.
double dual_objective(const ConstraintSystem& cs, Mode mode, const Eigen::VectorXd& lambda);

MaxEntropySolution solve_geometric(const ConstraintSystem& cs, const SolverOptions& options = {});
MaxEntropySolution solve_bernoulli(const ConstraintSystem& cs, const SolverOptions& options = {});

inline MaxEntropySolution solve_max_entropy(const ConstraintSystem& cs, Mode mode,
                                            const SolverOptions& options = {}) {
  return mode == Mode::Integer ? solve_geometric(cs, options) : solve_bernoulli(cs, options);
}

}  // namespace tpcount
