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

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tpcount/estimator.hpp"
#include "tpcount/polytope.hpp"
#include "tpcount/quad_form.hpp"
#include "tpcount/quadrature.hpp"

namespace tpcount {

/// The Gaussian on L with density proportional to exp(-q(t)).
struct GaussianModel {
  /// Retained block of B.
  Eigen::MatrixXd precision;
  /// Inverse of `precision`, assembled from eigen-reciprocals.
  Eigen::MatrixXd covariance;
  /// covariance = factor * factor^T.
  Eigen::MatrixXd factor;
  Eigen::VectorXd precision_eigenvalues;
  std::vector<int> retained_rows;
  /// Row c is a_c restricted to L, so s = cell_map * t.
  Eigen::MatrixXd cell_map;

  int dim_l() const { return static_cast<int>(covariance.rows()); }
};

/// Throws SpectrumDegenerate when the restricted form is not positive.
GaussianModel covariance_model(const QuadraticForm& qf, const ConstraintSystem& cs);

struct CheckReport {
  std::string name;
  bool ok = false;
  /// Largest observed value / bound; ok checks need it <= 1.
  double max_ratio = 0.0;
  std::vector<std::pair<std::string, double>> values;

  double value(const std::string& key) const;
};

/// Sigma_jj <= 14 nu^4 R / (omega^(6 nu - 3) r^2) k^(1 - nu) for every
/// retained coordinate.
CheckReport check_variance_bound(const GaussianModel& model, const ConstraintSystem& cs,
                                 const Witnesses& w);

/// |E <a_c,t><a_d,t>| <= G / k^(nu-1) for every pair of cells, and
/// <= G / k^nu when c and d differ in every index, G = 14 nu^4 R^2 /
/// (r^3 omega^(7 nu - 5)). The ratio against the constant 4 is reported as
/// well. Above 2000 cells a seeded sample of pairs is used.
CheckReport check_correlation_bounds(const GaussianModel& model, const ConstraintSystem& cs,
                                     const Witnesses& w, std::uint64_t seed = 0);

/// omega^(2 nu - 1) / (2k) <= ||T e_j||_inf <= 1 / (omega^(2 nu - 1) k) for
/// the orthogonal projection T onto the kernel.
CheckReport check_kernel_projection_norms(std::span<const int> dims);

/// Tail radii used when none are given.
std::span<const double> default_tail_deltas();

/// Union of per-coordinate normal tails against
/// nu k exp(-delta^2 k^(nu-1) / G), G = 2 nu^4 R / (omega^(6 nu - 3) r^2).
CheckReport check_gaussian_tail(const GaussianModel& model, const ConstraintSystem& cs,
                                const Witnesses& w,
                                std::span<const double> deltas = default_tail_deltas());

/// Exact E U^2 for U = sum_c beta_c <a_c,t>^3 by pairing, compared with a
/// seeded Monte Carlo estimate of E e^{iU}:
/// |mean e^{iU} - 1| <= E U^2 / 2 + 3 standard errors.
CheckReport check_third_degree_term(const GaussianModel& model, const IntegrandContext& ctx,
                                    std::uint64_t seed = 0, int draws = 100000);

/// Empirical covariance of seeded draws against Sigma, entrywise within 5
/// standard errors.
CheckReport check_sampling_covariance(const GaussianModel& model, std::uint64_t seed = 0,
                                      int draws = 100000);

/// E U^2 with U = sum_c beta_c s_c^3 and s ~ N(0, C).
double third_degree_second_moment(const Eigen::MatrixXd& cell_cov, const Eigen::VectorXd& beta);

/// Draws from the model; column i is the i-th sample.
Eigen::MatrixXd sample_gaussian(const GaussianModel& model, std::uint64_t seed, int draws);

struct DiagnosticsReport {
  std::vector<CheckReport> checks;
  bool ok = false;
};

DiagnosticsReport run_diagnostics(const CountEstimate& est, const ConstraintSystem& cs,
                                  std::uint64_t seed = 0);

}  // namespace tpcount
