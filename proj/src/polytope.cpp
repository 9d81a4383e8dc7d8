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

#include "tpcount/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tpcount {
namespace {

ValidationReport fail(ErrorKind kind, std::string message) {
  ValidationReport report;
  report.ok = false;
  report.error = kind;
  report.message = std::move(message);
  return report;
}

bool is_integral(double x) { return std::isfinite(x) && x == std::round(x); }

}  // namespace

std::vector<double> slice_sizes(std::span<const int> dims) {
  std::vector<double> sizes(dims.size(), 1.0);
  for (std::size_t j = 0; j < dims.size(); ++j) {
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (i != j) sizes[j] *= dims[i];
    }
  }
  return sizes;
}

ValidationReport validate_margins(const MarginSpec& spec,
                                  const ValidationOptions& options) {
  if (spec.nu < 3) {
    return fail(ErrorKind::DimensionMismatch,
                "nu must be at least 3, got " + std::to_string(spec.nu));
  }
  if (static_cast<int>(spec.dims.size()) != spec.nu ||
      static_cast<int>(spec.margins.size()) != spec.nu) {
    return fail(ErrorKind::DimensionMismatch,
                "dims and margins must both have nu entries");
  }
  for (int j = 0; j < spec.nu; ++j) {
    if (spec.dims[j] < 2) {
      return fail(ErrorKind::DimensionMismatch,
                  "direction " + std::to_string(j + 1) + " has k < 2");
    }
    if (static_cast<int>(spec.margins[j].size()) != spec.dims[j]) {
      return fail(ErrorKind::DimensionMismatch,
                  "margin vector " + std::to_string(j + 1) + " has length " +
                      std::to_string(spec.margins[j].size()) + ", expected " +
                      std::to_string(spec.dims[j]));
    }
  }

  for (int j = 0; j < spec.nu; ++j) {
    for (double s : spec.margins[j]) {
      if (!std::isfinite(s) || s < 0.0 || (options.require_positive && s <= 0.0)) {
        std::ostringstream os;
        os << "margin " << s << " in direction " << j + 1
           << (options.require_positive ? " is not positive" : " is negative");
        return fail(ErrorKind::NonPositiveMargin, os.str());
      }
      if (options.require_integer && !is_integral(s)) {
        std::ostringstream os;
        os << "margin " << s << " in direction " << j + 1 << " is not an integer";
        return fail(ErrorKind::NonIntegerMargins, os.str());
      }
    }
  }

  std::vector<double> totals(spec.nu);
  for (int j = 0; j < spec.nu; ++j) {
    totals[j] = std::accumulate(spec.margins[j].begin(), spec.margins[j].end(), 0.0);
  }
  const double scale = std::max(1.0, *std::max_element(totals.begin(), totals.end()));
  for (int j = 1; j < spec.nu; ++j) {
    if (std::abs(totals[j] - totals[0]) > 1e-9 * scale) {
      std::ostringstream os;
      os << "direction " << j + 1 << " sums to " << totals[j] << " but direction 1 sums to "
         << totals[0];
      return fail(ErrorKind::UnequalTotals, os.str());
    }
  }

  if (options.mode == Mode::Binary) {
    const auto capacity = slice_sizes(spec.dims);
    for (int j = 0; j < spec.nu; ++j) {
      for (int m = 0; m < spec.dims[j]; ++m) {
        if (spec.margins[j][m] > capacity[j]) {
          std::ostringstream os;
          os << "margin " << spec.margins[j][m] << " at direction " << j + 1 << ", index "
             << m + 1 << " exceeds the slice capacity " << capacity[j];
          return fail(ErrorKind::BinaryCapacityExceeded, os.str());
        }
      }
    }
  }

  ValidationReport ok;
  ok.total = totals[0];
  return ok;
}

void require_valid(const MarginSpec& spec, const ValidationOptions& options) {
  const auto report = validate_margins(spec, options);
  if (!report.ok) throw Error(*report.error, report.message);
}

ConstraintSystem::ConstraintSystem(const MarginSpec& spec)
    : nu_(spec.nu), dims_(spec.dims), rows_(0), cells_(1), total_(0.0) {
  if (nu_ < 1 || static_cast<int>(dims_.size()) != nu_ ||
      static_cast<int>(spec.margins.size()) != nu_) {
    throw Error(ErrorKind::DimensionMismatch, "malformed margin spec");
  }
  offsets_.resize(nu_);
  strides_.assign(nu_, 1);
  for (int j = 0; j < nu_; ++j) {
    offsets_[j] = rows_;
    rows_ += dims_[j];
    cells_ *= static_cast<std::size_t>(dims_[j]);
  }
  for (int j = nu_ - 2; j >= 0; --j) strides_[j] = strides_[j + 1] * dims_[j + 1];

  b_.resize(rows_);
  for (int j = 0; j < nu_; ++j) {
    if (static_cast<int>(spec.margins[j].size()) != dims_[j]) {
      throw Error(ErrorKind::DimensionMismatch, "margin length does not match dims");
    }
    for (int m = 0; m < dims_[j]; ++m) b_[offsets_[j] + m] = spec.margins[j][m];
  }
  total_ = std::accumulate(spec.margins[0].begin(), spec.margins[0].end(), 0.0);

  cell_rows_.resize(cells_ * nu_);
  std::vector<int> multi(nu_, 0);
  for (std::size_t c = 0; c < cells_; ++c) {
    for (int j = 0; j < nu_; ++j) cell_rows_[c * nu_ + j] = offsets_[j] + multi[j];
    for (int j = nu_ - 1; j >= 0; --j) {
      if (++multi[j] < dims_[j]) break;
      multi[j] = 0;
    }
  }

  l_position_.assign(rows_, -1);
  for (int j = 1; j < nu_; ++j) removed_rows_.push_back(offsets_[j] + dims_[j] - 1);
  for (int r = 0; r < rows_; ++r) {
    if (std::find(removed_rows_.begin(), removed_rows_.end(), r) == removed_rows_.end()) {
      l_position_[r] = static_cast<int>(retained_rows_.size());
      retained_rows_.push_back(r);
    }
  }
}

int ConstraintSystem::direction_of_row(int row) const {
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), row);
  return static_cast<int>(it - offsets_.begin()) - 1;
}

std::size_t ConstraintSystem::flat_index(std::span<const int> multi) const {
  if (static_cast<int>(multi.size()) != nu_) {
    throw Error(ErrorKind::LengthMismatch, "multi-index has wrong length");
  }
  std::size_t flat = 0;
  for (int j = 0; j < nu_; ++j) flat += static_cast<std::size_t>(multi[j]) * strides_[j];
  return flat;
}

std::vector<int> ConstraintSystem::multi_index(std::size_t flat) const {
  std::vector<int> multi(nu_);
  for (int j = 0; j < nu_; ++j) {
    multi[j] = static_cast<int>(flat / strides_[j]);
    flat %= strides_[j];
  }
  return multi;
}

Eigen::MatrixXd ConstraintSystem::dense_matrix() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows_, static_cast<Eigen::Index>(cells_));
  for (std::size_t c = 0; c < cells_; ++c) {
    for (int r : cell_rows(c)) a(r, static_cast<Eigen::Index>(c)) = 1.0;
  }
  return a;
}

Eigen::VectorXd ConstraintSystem::apply(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != cells_) {
    throw Error(ErrorKind::LengthMismatch, "vector length does not match the cell count");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(rows_);
  for (std::size_t c = 0; c < cells_; ++c) {
    for (int r : cell_rows(c)) out[r] += x[static_cast<Eigen::Index>(c)];
  }
  return out;
}

Eigen::VectorXd ConstraintSystem::project_l(const Eigen::VectorXd& v) const {
  if (v.size() != rows_) {
    throw Error(ErrorKind::LengthMismatch, "expected a vector of length " +
                                               std::to_string(rows_) + ", got " +
                                               std::to_string(v.size()));
  }
  Eigen::VectorXd out = v;
  for (int r : removed_rows_) out[r] = 0.0;
  return out;
}

Eigen::VectorXd ConstraintSystem::restrict_to_l(const Eigen::VectorXd& v) const {
  if (v.size() != rows_) throw Error(ErrorKind::LengthMismatch, "expected a length-K vector");
  Eigen::VectorXd out(dim_l());
  for (int i = 0; i < dim_l(); ++i) out[i] = v[retained_rows_[i]];
  return out;
}

Eigen::VectorXd ConstraintSystem::embed_from_l(const Eigen::VectorXd& t) const {
  if (t.size() != dim_l()) throw Error(ErrorKind::LengthMismatch, "expected a length-dimL vector");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(rows_);
  for (int i = 0; i < dim_l(); ++i) out[retained_rows_[i]] = t[i];
  return out;
}

ConstraintSystem build_constraints(const MarginSpec& spec) {
  ValidationOptions options;
  options.require_positive = false;
  require_valid(spec, options);
  return ConstraintSystem(spec);
}

KernelBasis kernel_basis(std::span<const int> dims) {
  const int nu = static_cast<int>(dims.size());
  KernelBasis basis;
  basis.slice_sizes = slice_sizes(dims);
  std::vector<int> offsets(nu, 0);
  int rows = 0;
  for (int j = 0; j < nu; ++j) {
    offsets[j] = rows;
    rows += dims[j];
  }
  for (int i = 0; i + 1 < nu; ++i) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(rows);
    double tail = 0.0;
    for (int p = i + 1; p < nu; ++p) {
      tail += basis.slice_sizes[p];
      u.segment(offsets[p], dims[p]).setConstant(basis.slice_sizes[p]);
    }
    u.segment(offsets[i], dims[i]).setConstant(-tail);
    basis.vectors.push_back(std::move(u));
  }
  return basis;
}

Eigen::VectorXd KernelBasis::project(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (const auto& u : vectors) {
    if (u.size() != v.size()) throw Error(ErrorKind::LengthMismatch, "kernel projection length");
    out += (u.dot(v) / u.squaredNorm()) * u;
  }
  return out;
}

}  // namespace tpcount
