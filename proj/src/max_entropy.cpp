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

#include "tpcount/max_entropy.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tpcount {
namespace {

double cell_sum(const ConstraintSystem& cs, std::size_t cell, const Eigen::VectorXd& lambda) {
  double s = 0.0;
  for (int r : cs.cell_rows(cell)) s += lambda[r];
  return s;
}

// Mean of the geometric or Bernoulli variable with natural parameter -s.
double mean_of(Mode mode, double s) {
  if (mode == Mode::Integer) return 1.0 / std::expm1(s);
  if (s >= 0.0) {
    const double e = std::exp(-s);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(s));
}

// Log-partition term of one cell.
double log_partition(Mode mode, double s) {
  if (mode == Mode::Integer) return -std::log(-std::expm1(-s));
  if (s >= 0.0) return std::log1p(std::exp(-s));
  return -s + std::log1p(std::exp(s));
}

double inf_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

void check_interior(const ConstraintSystem& cs, Mode mode) {
  const auto capacity = slice_sizes(cs.dims());
  for (int r = 0; r < cs.rows(); ++r) {
    const double s = cs.b()[r];
    const double cap = capacity[cs.direction_of_row(r)];
    const bool boundary = mode == Mode::Integer ? !(s > 0.0) : !(s > 0.0 && s < cap);
    if (boundary) {
      std::ostringstream os;
      os << "margin " << s << " on row " << r + 1 << " leaves no interior point";
      throw Error(ErrorKind::Infeasible, os.str());
    }
  }
}

MaxEntropySolution solve(const ConstraintSystem& cs, Mode mode, const SolverOptions& options) {
  check_interior(cs, mode);

  const auto n = static_cast<Eigen::Index>(cs.cells());
  const int dim_l = cs.dim_l();
  const auto& retained = cs.retained_rows();
  const double threshold = options.tol * std::max(1.0, inf_norm(cs.b()));

  // Constant start matching the mean cell value; exact for symmetric margins.
  const double mean = cs.total() / static_cast<double>(n);
  const double s0 = mode == Mode::Integer ? std::log1p(1.0 / mean) : std::log((1.0 - mean) / mean);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(cs.rows());
  for (int m = 0; m < cs.dims()[0]; ++m) lambda[cs.row(0, m)] = s0;

  MaxEntropySolution sol;
  sol.mode = mode;
  Eigen::VectorXd z = means_from_multipliers(cs, mode, lambda);
  Eigen::VectorXd residual = cs.apply(z) - cs.b();
  double phi = dual_objective(cs, mode, lambda);

  int iter = 0;
  for (; inf_norm(residual) > threshold; ++iter) {
    if (iter >= options.max_iters) {
      std::ostringstream os;
      os << "Newton iteration stopped after " << iter << " steps with residual "
         << inf_norm(residual);
      throw Error(ErrorKind::NoConvergence, os.str());
    }

    Eigen::MatrixXd hessian = Eigen::MatrixXd::Zero(dim_l, dim_l);
    for (Eigen::Index c = 0; c < n; ++c) {
      const double w = mode == Mode::Integer ? z[c] * (1.0 + z[c]) : z[c] * (1.0 - z[c]);
      const auto rows = cs.cell_rows(static_cast<std::size_t>(c));
      for (int a : rows) {
        const int pa = cs.l_position(a);
        if (pa < 0) continue;
        for (int b : rows) {
          const int pb = cs.l_position(b);
          if (pb >= 0) hessian(pa, pb) += w;
        }
      }
    }
    Eigen::VectorXd rhs(dim_l);
    for (int i = 0; i < dim_l; ++i) rhs[i] = residual[retained[i]];
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
    if (ldlt.info() != Eigen::Success) {
      throw Error(ErrorKind::NoConvergence, "Newton system is singular");
    }
    const Eigen::VectorXd step_l = ldlt.solve(rhs);
    Eigen::VectorXd step = Eigen::VectorXd::Zero(cs.rows());
    for (int i = 0; i < dim_l; ++i) step[retained[i]] = step_l[i];
    // Directional derivative of the dual along the step: (b - Az) . step.
    const double slope = -rhs.dot(step_l);
    const double res_norm = residual.norm();

    bool accepted = false;
    double t = 1.0;
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      const Eigen::VectorXd trial = lambda + t * step;
      const double trial_phi = dual_objective(cs, mode, trial);
      if (!std::isfinite(trial_phi)) continue;  // left the geometric domain
      const Eigen::VectorXd trial_z = means_from_multipliers(cs, mode, trial);
      const Eigen::VectorXd trial_res = cs.apply(trial_z) - cs.b();
      const bool armijo = trial_phi <= phi + 1e-4 * t * slope;
      // Near the optimum the dual is flat to rounding; fall back on the
      // primal residual.
      const bool flat = trial_phi <= phi + 1e-13 * std::max(1.0, std::abs(phi)) &&
                        trial_res.norm() < res_norm;
      if (armijo || flat) {
        lambda = trial;
        z = trial_z;
        residual = trial_res;
        phi = trial_phi;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream os;
      os << "line search failed at iteration " << iter << " with residual " << inf_norm(residual);
      throw Error(ErrorKind::NoConvergence, os.str());
    }
  }

  sol.z = std::move(z);
  sol.lambda = std::move(lambda);
  sol.gz = entropy(mode, sol.z);
  sol.kkt_residual = inf_norm(residual);
  sol.iterations = iter;
  return sol;
}

}  // namespace

double entropy_geometric(std::span<const double> x) {
  double g = 0.0;
  for (double xi : x) {
    if (!(xi >= 0.0)) throw Error(ErrorKind::NegativeEntry, "geometric entropy needs x >= 0");
    g += (xi + 1.0) * std::log1p(xi);
    if (xi > 0.0) g -= xi * std::log(xi);
  }
  return g;
}

double entropy_bernoulli(std::span<const double> x) {
  double g = 0.0;
  for (double xi : x) {
    if (!(xi >= 0.0 && xi <= 1.0)) {
      throw Error(ErrorKind::OutOfRange, "Bernoulli entropy needs 0 <= x <= 1");
    }
    if (xi > 0.0) g -= xi * std::log(xi);
    if (xi < 1.0) g -= (1.0 - xi) * std::log1p(-xi);
  }
  return g;
}

Eigen::VectorXd means_from_multipliers(const ConstraintSystem& cs, Mode mode,
                                       const Eigen::VectorXd& lambda) {
  if (lambda.size() != cs.rows()) throw Error(ErrorKind::LengthMismatch, "multiplier length");
  Eigen::VectorXd z(static_cast<Eigen::Index>(cs.cells()));
  for (std::size_t c = 0; c < cs.cells(); ++c) {
    z[static_cast<Eigen::Index>(c)] = mean_of(mode, cell_sum(cs, c, lambda));
  }
  return z;
}

double dual_objective(const ConstraintSystem& cs, Mode mode, const Eigen::VectorXd& lambda) {
  if (lambda.size() != cs.rows()) throw Error(ErrorKind::LengthMismatch, "multiplier length");
  double phi = cs.b().dot(lambda);
  for (std::size_t c = 0; c < cs.cells(); ++c) {
    const double s = cell_sum(cs, c, lambda);
    if (mode == Mode::Integer && !(s > 0.0)) return std::numeric_limits<double>::infinity();
    phi += log_partition(mode, s);
  }
  return phi;
}

MaxEntropySolution solve_geometric(const ConstraintSystem& cs, const SolverOptions& options) {
  return solve(cs, Mode::Integer, options);
}

MaxEntropySolution solve_bernoulli(const ConstraintSystem& cs, const SolverOptions& options) {
  return solve(cs, Mode::Binary, options);
}

}  // namespace tpcount
