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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tpcount/errors.hpp"

namespace tpcount {

/// Dimensions k_1..k_nu and one margin vector per direction.
struct MarginSpec {
  int nu = 0;
  std::vector<int> dims;
  std::vector<std::vector<double>> margins;
};

struct ValidationOptions {
  Mode mode = Mode::Integer;
  /// Estimation needs an interior point, so every margin must be > 0.
  bool require_positive = true;
  /// Exact counting needs integral margins.
  bool require_integer = false;
};

struct ValidationReport {
  bool ok = true;
  std::optional<ErrorKind> error;
  std::string message;
  double total = 0.0;
};

/// Checks the structural and arithmetic invariants of a margin spec.
/// Structure (nu >= 3, every k_j >= 2, lengths) is checked first, then sign,
/// integrality, equal totals and, in binary mode, slice capacities
/// S^j_m <= prod_{i != j} k_i.
ValidationReport validate_margins(const MarginSpec& spec,
                                  const ValidationOptions& options = {});

/// Throws Error carrying the first failed check.
void require_valid(const MarginSpec& spec, const ValidationOptions& options = {});

/// prod_{i != j} k_i for every direction j.
std::vector<double> slice_sizes(std::span<const int> dims);

/// The constraint system Ax = b of a transportation polytope.
///
/// Rows are grouped by direction: row offset(j) + m holds the margin
/// S^j_m. Cells are flattened row-major with the last index varying fastest.
/// The subspace L drops the last row of every direction j >= 2; those rows
/// are `removed_rows()` and the remaining `dim_l()` rows form an independent
/// system.
class ConstraintSystem {
 public:
  explicit ConstraintSystem(const MarginSpec& spec);

  int nu() const { return nu_; }
  std::size_t cells() const { return cells_; }
  int rows() const { return rows_; }
  int dim_l() const { return rows_ - nu_ + 1; }
  double total() const { return total_; }

  const std::vector<int>& dims() const { return dims_; }
  int offset(int direction) const { return offsets_[direction]; }
  int row(int direction, int index) const { return offsets_[direction] + index; }
  int direction_of_row(int row) const;

  const Eigen::VectorXd& b() const { return b_; }

  /// The nu rows touched by `cell`, one per direction in direction order.
  std::span<const int> cell_rows(std::size_t cell) const {
    return {cell_rows_.data() + cell * nu_, static_cast<std::size_t>(nu_)};
  }

  std::size_t flat_index(std::span<const int> multi) const;
  std::vector<int> multi_index(std::size_t flat) const;

  const std::vector<int>& removed_rows() const { return removed_rows_; }
  const std::vector<int>& retained_rows() const { return retained_rows_; }
  bool is_retained(int row) const { return l_position_[row] >= 0; }
  /// Position of `row` among the retained rows, or -1.
  int l_position(int row) const { return l_position_[row]; }

  /// Dense K x n 0/1 matrix; built on demand.
  Eigen::MatrixXd dense_matrix() const;

  /// A x computed through the cell index.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

  /// Orthogonal projection onto L (zeroes the removed coordinates). Throws
  /// LengthMismatch unless v has length K.
  Eigen::VectorXd project_l(const Eigen::VectorXd& v) const;

  /// Retained coordinates of a length-K vector.
  Eigen::VectorXd restrict_to_l(const Eigen::VectorXd& v) const;
  /// Inverse of restrict_to_l: zeros at removed rows.
  Eigen::VectorXd embed_from_l(const Eigen::VectorXd& t) const;

 private:
  int nu_;
  std::vector<int> dims_;
  std::vector<int> offsets_;
  std::vector<int> strides_;
  int rows_;
  std::size_t cells_;
  double total_;
  Eigen::VectorXd b_;
  std::vector<int> cell_rows_;
  std::vector<int> removed_rows_;
  std::vector<int> retained_rows_;
  std::vector<int> l_position_;
};

/// Validates structure and equal totals (sign and positivity are left to
/// the caller) and builds the system.
ConstraintSystem build_constraints(const MarginSpec& spec);

/// Orthogonal basis u_1..u_{nu-1} of the kernel of every form
/// sum_cells alpha_cell <a_cell, t>^2. u_i is zero on directions < i,
/// -(k'_{i+1} + ... + k'_nu) on direction i and k'_p on directions p > i.
struct KernelBasis {
  std::vector<Eigen::VectorXd> vectors;
  std::vector<double> slice_sizes;

  /// Orthogonal projection of v onto the kernel.
  Eigen::VectorXd project(const Eigen::VectorXd& v) const;
};

KernelBasis kernel_basis(std::span<const int> dims);

}  // namespace tpcount
