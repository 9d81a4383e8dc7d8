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

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "tpcount/errors.hpp"
#include "tpcount/max_entropy.hpp"
#include "tpcount/oracle.hpp"
#include "tpcount/polytope.hpp"

namespace tpcount {

/// The characteristic-function integrand of the counting problem.
///
/// Points t are given in L coordinates (length dimL) and embedded into R^K
/// with zeros on the removed rows. With s_j = <a_j, t>:
///   integer mode  F(t) = exp(-i<t,b>) prod_j 1 / (1 + zeta_j - zeta_j e^{i s_j})
///   binary mode   F(t) = exp(-i<t,b>) prod_j (1 - zeta_j + zeta_j e^{i s_j})
/// and the count equals e^{g(z)} (2 pi)^{-dimL} times the integral of F over
/// the cube [-pi, pi]^dimL.
///
/// Near the origin ln F(t) = -q(t) + i sigma f(t) + h(t) with sigma = -1 in
/// integer mode and +1 in binary mode, where
///   f(t) = 1/6 sum_j alpha_j (2 zeta_j +- 1) s_j^3
///   |h(t)| <= 2 sum_j (1 + zeta_j^4) s_j^4   (integer)
///   |h(t)| <= 2 sum_j s_j^4                  (binary)
/// inside the expansion radius.
class IntegrandContext {
 public:
  IntegrandContext(ConstraintSystem cs, MaxEntropySolution solution);

  Mode mode() const { return solution_.mode; }
  const ConstraintSystem& constraints() const { return cs_; }
  const MaxEntropySolution& solution() const { return solution_; }
  int dim_l() const { return cs_.dim_l(); }

  /// Throws PoleEncountered if an integer-mode denominator vanishes.
  std::complex<double> F(const Eigen::VectorXd& t) const;
  /// Sum of principal logarithms of the factors of F.
  std::complex<double> log_F(const Eigen::VectorXd& t) const;

  double q(const Eigen::VectorXd& t) const;
  /// Throws OutOfExpansionRadius outside the radius.
  double cubic_f(const Eigen::VectorXd& t) const;
  double quartic_h_bound(const Eigen::VectorXd& t) const;

  /// 1/(2 nu sqrt(R)) with R = max(1, max alpha) in integer mode, 1/(2 nu)
  /// in binary mode.
  double expansion_radius() const;
  /// alpha_j (2 zeta_j +- 1) / 6, so that f(t) = sum_j c_j s_j^3.
  const Eigen::VectorXd& cubic_coefficients() const { return cubic_; }
  const Eigen::VectorXd& weights() const { return alpha_; }
  int phase_sign() const { return mode() == Mode::Integer ? -1 : 1; }

  /// s_j = <a_j, t> for every cell.
  Eigen::VectorXd cell_sums(const Eigen::VectorXd& t) const;

 private:
  void require_in_radius(const Eigen::VectorXd& t) const;

  ConstraintSystem cs_;
  MaxEntropySolution solution_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd cubic_;
};

/// Mean of F over the periodic grid {2 pi (x - N/2) / N : 0 <= x < N}^dimL.
/// The sum over one direction factorizes once the other coordinates are
/// fixed, which is how this evaluates it. Margins must be integral.
std::complex<double> grid_mean_F(const IntegrandContext& ctx, int grid);

/// Same rule, evaluated point by point through IntegrandContext::F.
std::complex<double> grid_mean_F_direct(const IntegrandContext& ctx, int grid);

struct QuadratureOptions {
  int max_dim_l = 5;
  /// Relative disagreement allowed between grid N and grid N/2.
  double refine_tol = 1e-4;
  std::uint64_t max_evaluations = 4'000'000'000ULL;
};

struct QuadratureReport {
  Mode mode = Mode::Integer;
  int grid = 0;
  double value = 0.0;
  double imag = 0.0;
  double coarse_value = 0.0;
  double refinement_delta = 0.0;
  BigInt exact_count;
  double rel_error = 0.0;
};

/// Quadrature estimate e^{g(z)} Re(mean F) on a grid of `grid` points per axis.
std::complex<double> quadrature_count(const IntegrandContext& ctx, int grid);

/// Compares the quadrature of the integral representation against the exact
/// count. Throws BudgetExceeded (dimension or work too large) and
/// QuadratureNotConverged (grid N and N/2 disagree by more than refine_tol).
QuadratureReport verify_integral_representation(const MarginSpec& spec, Mode mode, int grid,
                                                const QuadratureOptions& options = {},
                                                const CountOptions& count_options = {},
                                                const SolverOptions& solver_options = {});

}  // namespace tpcount
