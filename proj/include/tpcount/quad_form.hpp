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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tpcount/errors.hpp"
#include "tpcount/max_entropy.hpp"
#include "tpcount/polytope.hpp"

namespace tpcount {

/// q(t) = 1/2 sum_cells alpha_cell <a_cell, t>^2 = 1/2 <t, B t>.
struct QuadraticForm {
  Mode mode = Mode::Integer;
  Eigen::VectorXd alpha;
  Eigen::MatrixXd B;
};

/// Assembles B = sum_cells alpha_cell a_cell a_cell^T. Weights must be > 0.
QuadraticForm quadratic_form(const ConstraintSystem& cs, const Eigen::VectorXd& alpha,
                             Mode mode = Mode::Integer);

/// alpha = zeta + zeta^2 (integer) or zeta - zeta^2 (binary).
QuadraticForm build_q(const MaxEntropySolution& solution, const ConstraintSystem& cs);

/// Spectrum of QBQ split into the dimL eigenpairs lying in L and the nu - 1
/// zero eigenpairs along the removed coordinates.
struct RestrictedSpectrum {
  /// In-L eigenvalues, descending.
  Eigen::VectorXd eigenvalues;
  /// Matching unit eigenvectors embedded in R^K (columns).
  Eigen::MatrixXd eigenvectors;
  /// All K eigenvalues of QBQ, descending.
  Eigen::VectorXd full_eigenvalues;
  double logdet = 0.0;

  int dim_l() const { return static_cast<int>(eigenvalues.size()); }
};

/// Throws SpectrumDegenerate when an in-L eigenvalue is not positive at
/// relative tolerance 1e-9.
RestrictedSpectrum restricted_spectrum(const QuadraticForm& qf, const ConstraintSystem& cs);

/// Witness constants: r <= alpha <= R and omega k <= k_j <= k.
struct Witnesses {
  double r = 0.0;
  double R = 0.0;
  double omega = 0.0;
  double k = 0.0;
};

/// omega = min k_j / max k_j and k = max k_j.
Witnesses shape_witnesses(std::span<const int> dims, double r, double R);

struct BoundGroup {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> values;
  bool ok = false;
};

struct EigenvalueBoundReport {
  BoundGroup small;   // nu - 1 smallest
  BoundGroup large;   // the largest
  BoundGroup middle;  // the remaining dimL - nu
  /// Squared distance of each small eigenvector to ker(B); checked only when
  /// the small group is separated from the rest by a relative gap > 1e-6.
  bool distance_checked = false;
  double distance_bound = 0.0;
  std::vector<double> distances;
  bool distance_ok = true;
  bool ok = false;
};

EigenvalueBoundReport check_eigenvalue_bounds(const ConstraintSystem& cs,
                                              const RestrictedSpectrum& spectrum,
                                              const Witnesses& w);

/// ln of the integral of exp(-q) over L: (dimL/2) ln(2 pi) - logdet/2.
double gaussian_log_integral(const RestrictedSpectrum& spectrum);

/// Log of the lower bound exp(-nu^2 k ln(k)/4 - nu k ln(R)/2).
double lower_bound_gaussian_integral(int nu, double k, double R);

}  // namespace tpcount
