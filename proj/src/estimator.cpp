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

#include "tpcount/estimator.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace tpcount {
namespace {

constexpr double kPi = std::numbers::pi;
// Smallest R accepted in integer mode; the hypotheses need R > 1.
constexpr double kMinIntegerR = 1.0 + 1e-9;

CountEstimate run_pipeline(const MarginSpec& spec, Mode mode, const SolverOptions& options) {
  const ConstraintSystem cs(spec);
  CountEstimate est;
  est.mode = mode;
  est.solution = solve_max_entropy(cs, mode, options);
  const QuadraticForm qf = build_q(est.solution, cs);
  est.spectrum = restricted_spectrum(qf, cs);
  est.dim_l = cs.dim_l();
  est.log_estimate = est.solution.gz - 0.5 * cs.dim_l() * std::log(2.0 * kPi) -
                     0.5 * est.spectrum.logdet;
  est.log10_estimate = est.log_estimate / std::numbers::ln10;
  if (est.log_estimate < std::log(std::numeric_limits<double>::max())) {
    est.estimate = std::exp(est.log_estimate);
  }
  est.hypothesis = hypothesis_check(mode, est.solution.z, cs.dims());
  return est;
}

}  // namespace

HypothesisReport hypothesis_report(Mode mode, int nu, const Witnesses& w) {
  HypothesisReport h;
  h.mode = mode;
  h.nu = nu;
  h.r = w.r;
  h.R = w.R;
  h.omega = w.omega;
  h.k = w.k;

  const double v = nu;
  const double k = w.k;
  const double two_nu = std::pow(2.0, v);
  const double om_nu = std::pow(w.omega, v);
  const double lnk = std::log(k);

  if (mode == Mode::Integer) {
    h.ineq1_lhs = 8.0 * kPi * kPi * two_nu * v * v /
                  (om_nu * std::log1p(0.4 * kPi * kPi * w.r)) *
                  (0.5 * v * v * k * lnk + 0.5 * v * k * std::log(w.R)) * std::pow(k, 1.0 - v);
    h.ineq1_rhs = 1.0 / (4.0 * v * v * w.R);
    h.ineq2_lhs = 64.0 * kPi * kPi * two_nu * std::pow(v, 6) * w.R * w.R / (om_nu * w.r) * lnk *
                  std::pow(k, 2.0 - v);
    h.gamma = 256.0 * w.R * w.R * std::pow(kPi, 4) * std::pow(4.0, v) * std::pow(v, 8) /
              std::pow(w.omega, 2.0 * v);
    h.R_ok = w.R > 1.0;
  } else {
    h.ineq1_lhs = 10.0 * std::pow(v, 4) * two_nu / (w.r * om_nu) * lnk * std::pow(k, 2.0 - v);
    h.ineq1_rhs = 1.0 / (4.0 * v * v);
    h.ineq2_lhs = 20.0 * std::pow(v, 6) * two_nu / (w.r * w.r * om_nu) * lnk * std::pow(k, 2.0 - v);
    h.gamma = 400.0 * std::pow(v, 12) * two_nu / (w.r * w.r * std::pow(w.omega, 2.0 * v));
    h.R_ok = true;
  }
  h.ineq2_rhs = 0.75;
  h.ineq1_ok = h.ineq1_lhs <= h.ineq1_rhs;
  h.ineq2_ok = h.ineq2_lhs <= h.ineq2_rhs;
  h.omega_k_ok = w.omega * w.k >= 2.0;
  h.rel_error_bound = h.gamma * std::pow(k, 2.5 - v);
  h.satisfied = h.ineq1_ok && h.ineq2_ok && h.omega_k_ok && h.R_ok;
  return h;
}

HypothesisReport hypothesis_check(Mode mode, const Eigen::VectorXd& z, std::span<const int> dims) {
  const Eigen::VectorXd alpha =
      mode == Mode::Integer ? Eigen::VectorXd(z + z.cwiseProduct(z)) : Eigen::VectorXd(z - z.cwiseProduct(z));
  const double r = alpha.minCoeff();
  const double R = mode == Mode::Integer ? std::max(alpha.maxCoeff(), kMinIntegerR) : 0.25;
  return hypothesis_report(mode, static_cast<int>(dims.size()), shape_witnesses(dims, r, R));
}

CountEstimate estimate_integer(const MarginSpec& spec, const SolverOptions& options) {
  ValidationOptions v;
  v.mode = Mode::Integer;
  v.require_positive = true;
  require_valid(spec, v);
  return run_pipeline(spec, Mode::Integer, options);
}

CountEstimate estimate_binary(const MarginSpec& spec, const SolverOptions& options) {
  // Boundary margins pass validation and surface as Infeasible from the solver.
  ValidationOptions v;
  v.mode = Mode::Binary;
  v.require_positive = false;
  require_valid(spec, v);
  return run_pipeline(spec, Mode::Binary, options);
}

}  // namespace tpcount
