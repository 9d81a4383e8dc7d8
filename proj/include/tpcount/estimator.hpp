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

#include <optional>

#include <Eigen/Dense>

#include "tpcount/errors.hpp"
#include "tpcount/max_entropy.hpp"
#include "tpcount/polytope.hpp"
#include "tpcount/quad_form.hpp"

namespace tpcount {

/// Arithmetic of the hypotheses attached to the Gaussian estimate.
///
/// Integer mode:
///   (8 pi^2 2^nu nu^2 / (omega^nu ln(1 + 2 pi^2 r / 5)))
///     * (nu^2 k ln(k) / 2 + nu k ln(R) / 2) k^(1-nu)  <=  1 / (4 nu^2 R)
///   (64 pi^2 2^nu nu^6 R^2 / (omega^nu r)) ln(k) k^(2-nu)  <=  3/4
///   Gamma = 256 R^2 pi^4 4^nu nu^8 / omega^(2 nu)
/// Binary mode:
///   (10 nu^4 2^nu / (r omega^nu)) ln(k) k^(2-nu)  <=  1 / (4 nu^2)
///   (20 nu^6 2^nu / (r^2 omega^nu)) ln(k) k^(2-nu)  <=  3/4
///   Gamma = 400 nu^12 2^nu / (r^2 omega^(2 nu))
/// The relative error bound is Gamma k^(2.5 - nu). Gamma is only known to be
/// valid past an unquantified threshold on k, which `gamma_asymptotic_only`
/// records.
struct HypothesisReport {
  Mode mode = Mode::Integer;
  int nu = 0;
  double r = 0.0;
  double R = 0.0;
  double omega = 0.0;
  double k = 0.0;
  double ineq1_lhs = 0.0;
  double ineq1_rhs = 0.0;
  bool ineq1_ok = false;
  double ineq2_lhs = 0.0;
  double ineq2_rhs = 0.0;
  bool ineq2_ok = false;
  bool omega_k_ok = false;
  bool R_ok = true;
  double gamma = 0.0;
  double rel_error_bound = 0.0;
  bool gamma_asymptotic_only = true;
  bool satisfied = false;
};

/// Evaluates the hypotheses for explicit witnesses.
HypothesisReport hypothesis_report(Mode mode, int nu, const Witnesses& w);

/// Witnesses from the solved point: r = min alpha, R = max alpha (raised to
/// just above 1 in integer mode, fixed at 1/4 in binary mode), k = max k_j,
/// omega = min k_j / k.
HypothesisReport hypothesis_check(Mode mode, const Eigen::VectorXd& z, std::span<const int> dims);

struct CountEstimate {
  Mode mode = Mode::Integer;
  /// g(z) - (dimL/2) ln(2 pi) - logdet/2.
  double log_estimate = 0.0;
  double log10_estimate = 0.0;
  /// exp(log_estimate) when it fits a double.
  std::optional<double> estimate;
  HypothesisReport hypothesis;
  MaxEntropySolution solution;
  RestrictedSpectrum spectrum;
  int dim_l = 0;
};

CountEstimate estimate_integer(const MarginSpec& spec, const SolverOptions& options = {});
CountEstimate estimate_binary(const MarginSpec& spec, const SolverOptions& options = {});

inline CountEstimate estimate(const MarginSpec& spec, Mode mode, const SolverOptions& options = {}) {
  return mode == Mode::Integer ? estimate_integer(spec, options) : estimate_binary(spec, options);
}

}  // namespace tpcount
