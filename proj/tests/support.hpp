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
#include <random>
#include <vector>

#include "tpcount/polytope.hpp"

namespace tpcount::testing {

inline MarginSpec make_spec(std::vector<int> dims, std::vector<std::vector<double>> margins) {
  MarginSpec spec;
  spec.nu = static_cast<int>(dims.size());
  spec.dims = std::move(dims);
  spec.margins = std::move(margins);
  return spec;
}

// Every margin equal to c * prod_{i != j} k_i.
inline MarginSpec polystochastic(const std::vector<int>& dims, double c) {
  const auto sizes = slice_sizes(dims);
  MarginSpec spec = make_spec(dims, {});
  for (std::size_t j = 0; j < dims.size(); ++j) {
    spec.margins.emplace_back(dims[j], c * sizes[j]);
  }
  return spec;
}

// Margins of a random nonnegative integer array, so the polytope is nonempty.
inline MarginSpec random_integer_spec(const std::vector<int>& dims, int max_entry, std::mt19937_64& rng) {
  MarginSpec spec = make_spec(dims, {});
  for (int k : dims) spec.margins.emplace_back(k, 0.0);
  ConstraintSystem shape(polystochastic(dims, 1.0));
  std::uniform_int_distribution<int> entry(0, max_entry);
  for (std::size_t c = 0; c < shape.cells(); ++c) {
    const int x = entry(rng);
    const auto idx = shape.multi_index(c);
    for (std::size_t j = 0; j < dims.size(); ++j) spec.margins[j][idx[j]] += x;
  }
  return spec;
}

}  // namespace tpcount::testing
