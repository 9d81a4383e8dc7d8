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

#include <boost/multiprecision/cpp_int.hpp>

#include "tpcount/errors.hpp"
#include "tpcount/polytope.hpp"

namespace tpcount {

using BigInt = boost::multiprecision::cpp_int;

struct CountOptions {
  /// Maximum number of search nodes (or generating-function terms) visited
  /// before BudgetExceeded is raised.
  std::uint64_t budget = 200'000'000;
};

struct CountResult {
  BigInt count;
  std::uint64_t nodes = 0;
};

/// Exact number of nonnegative integer arrays with the given margins.
///
/// Depth-first assignment in flat cell order after sorting directions by
/// decreasing k_j. A cell that is the last open cell of some margin is
/// forced to that margin's residual; binary mode additionally prunes when a
/// residual exceeds the number of open cells left on its margin.
CountResult count_exact(const MarginSpec& spec, Mode mode, const CountOptions& options = {});

inline BigInt count_integer_exact(const MarginSpec& spec, const CountOptions& options = {}) {
  return count_exact(spec, Mode::Integer, options).count;
}

inline BigInt count_binary_exact(const MarginSpec& spec, const CountOptions& options = {}) {
  return count_exact(spec, Mode::Binary, options).count;
}

/// Independent count: multiplies the generating polynomials of the slices
/// along the last direction, tracking the partial margins of the other
/// directions, and reads off the coefficient of the target margins.
CountResult count_by_slice_fold(const MarginSpec& spec, Mode mode,
                                const CountOptions& options = {});

}  // namespace tpcount
