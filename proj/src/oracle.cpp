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

#include "tpcount/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <vector>

namespace tpcount {
namespace {

void validate_for_counting(const MarginSpec& spec, Mode mode) {
  ValidationOptions v;
  v.mode = mode;
  v.require_positive = false;
  v.require_integer = true;
  require_valid(spec, v);
}

[[noreturn]] void budget_exceeded(std::uint64_t nodes, const BigInt& partial) {
  std::ostringstream os;
  os << "search budget exhausted after " << nodes << " nodes (partial count " << partial << ")";
  throw Error(ErrorKind::BudgetExceeded, os.str());
}

class DepthFirstCounter {
 public:
  DepthFirstCounter(const ConstraintSystem& cs, Mode mode, std::uint64_t budget)
      : cs_(cs), binary_(mode == Mode::Binary), budget_(budget) {
    residual_.resize(cs.rows());
    for (int r = 0; r < cs.rows(); ++r) residual_[r] = static_cast<long long>(cs.b()[r]);
    const auto sizes = slice_sizes(cs.dims());
    open_.resize(cs.rows());
    for (int r = 0; r < cs.rows(); ++r) {
      open_[r] = static_cast<long long>(sizes[cs.direction_of_row(r)]);
    }
  }

  CountResult run() {
    visit(0);
    return {count_, nodes_};
  }

 private:
  void visit(std::size_t cell) {
    if (++nodes_ > budget_) budget_exceeded(nodes_, count_);
    if (cell == cs_.cells()) {
      count_ += 1;
      return;
    }
    const auto rows = cs_.cell_rows(cell);
    for (int r : rows) --open_[r];

    long long hi = binary_ ? 1 : residual_[rows[0]];
    long long lo = 0;
    bool feasible = true;
    for (int r : rows) hi = std::min(hi, residual_[r]);
    for (int r : rows) {
      if (open_[r] == 0) {
        // Last open cell of this margin: the value is forced.
        if (residual_[r] < lo || residual_[r] > hi) {
          feasible = false;
          break;
        }
        lo = hi = residual_[r];
      }
    }
    if (feasible) {
      for (long long v = lo; v <= hi; ++v) {
        bool ok = true;
        for (int r : rows) {
          residual_[r] -= v;
          if (binary_ && residual_[r] > open_[r]) ok = false;
        }
        if (ok) visit(cell + 1);
        for (int r : rows) residual_[r] += v;
      }
    }
    for (int r : rows) ++open_[r];
  }

  const ConstraintSystem& cs_;
  bool binary_;
  std::uint64_t budget_;
  std::vector<long long> residual_;
  std::vector<long long> open_;
  BigInt count_ = 0;
  std::uint64_t nodes_ = 0;
};

using Poly = std::map<std::vector<int>, BigInt>;

// All slice arrays with the given total, keyed by their marginals over the
// first nu - 1 directions.
class SlicePolynomial {
 public:
  SlicePolynomial(const std::vector<int>& dims, const std::vector<int>& caps, bool binary,
                  std::uint64_t& nodes, std::uint64_t budget)
      : dims_(dims), caps_(caps), binary_(binary), nodes_(nodes), budget_(budget) {
    offsets_.resize(dims.size());
    int rows = 0;
    cells_ = 1;
    for (std::size_t j = 0; j < dims.size(); ++j) {
      offsets_[j] = rows;
      rows += dims[j];
      cells_ *= dims[j];
    }
    marg_.assign(rows, 0);
    multi_.assign(dims.size(), 0);
  }

  Poly build(int total) {
    poly_.clear();
    remaining_ = total;
    fill(0);
    return poly_;
  }

 private:
  void fill(int cell) {
    if (++nodes_ > budget_) budget_exceeded(nodes_, 0);
    if (cell == cells_) {
      if (remaining_ == 0) poly_[marg_] += 1;
      return;
    }
    // multi_ holds the multi-index of `cell`.
    int hi = binary_ ? std::min(1, remaining_) : remaining_;
    for (std::size_t j = 0; j < dims_.size(); ++j) {
      const int r = offsets_[j] + multi_[j];
      hi = std::min(hi, caps_[r] - marg_[r]);
    }
    const auto saved = multi_;
    advance();
    for (int v = 0; v <= hi; ++v) {
      for (std::size_t j = 0; j < dims_.size(); ++j) marg_[offsets_[j] + saved[j]] += v;
      remaining_ -= v;
      fill(cell + 1);
      remaining_ += v;
      for (std::size_t j = 0; j < dims_.size(); ++j) marg_[offsets_[j] + saved[j]] -= v;
    }
    multi_ = saved;
  }

  void advance() {
    for (int j = static_cast<int>(dims_.size()) - 1; j >= 0; --j) {
      if (++multi_[j] < dims_[j]) return;
      multi_[j] = 0;
    }
  }

  std::vector<int> dims_;
  std::vector<int> caps_;
  bool binary_;
  std::uint64_t& nodes_;
  std::uint64_t budget_;
  std::vector<int> offsets_;
  int cells_ = 0;
  std::vector<int> marg_;
  std::vector<int> multi_;
  int remaining_ = 0;
  Poly poly_;
};

}  // namespace

CountResult count_exact(const MarginSpec& spec, Mode mode, const CountOptions& options) {
  validate_for_counting(spec, mode);

  std::vector<int> order(spec.nu);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return spec.dims[a] > spec.dims[b]; });
  MarginSpec sorted;
  sorted.nu = spec.nu;
  for (int j : order) {
    sorted.dims.push_back(spec.dims[j]);
    sorted.margins.push_back(spec.margins[j]);
  }
  const ConstraintSystem cs(sorted);
  return DepthFirstCounter(cs, mode, options.budget).run();
}

CountResult count_by_slice_fold(const MarginSpec& spec, Mode mode, const CountOptions& options) {
  validate_for_counting(spec, mode);

  const int last = spec.nu - 1;
  std::vector<int> head_dims(spec.dims.begin(), spec.dims.begin() + last);
  std::vector<int> target;
  for (int j = 0; j < last; ++j) {
    for (double s : spec.margins[j]) target.push_back(static_cast<int>(s));
  }

  CountResult result;
  SlicePolynomial slices(head_dims, target, mode == Mode::Binary, result.nodes, options.budget);
  Poly acc;
  acc[std::vector<int>(target.size(), 0)] = 1;
  for (double slice_total : spec.margins[last]) {
    const Poly slice = slices.build(static_cast<int>(slice_total));
    Poly next;
    for (const auto& [state, count] : acc) {
      for (const auto& [contribution, multiplicity] : slice) {
        if (++result.nodes > options.budget) budget_exceeded(result.nodes, 0);
        std::vector<int> sum(state.size());
        bool fits = true;
        for (std::size_t i = 0; i < state.size(); ++i) {
          sum[i] = state[i] + contribution[i];
          if (sum[i] > target[i]) {
            fits = false;
            break;
          }
        }
        if (fits) next[sum] += count * multiplicity;
      }
    }
    acc = std::move(next);
  }
  const auto it = acc.find(target);
  result.count = it == acc.end() ? BigInt(0) : it->second;
  return result;
}

}  // namespace tpcount
