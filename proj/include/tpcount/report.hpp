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
#include <optional>
#include <string>

#include <json.hpp>

#include "tpcount/errors.hpp"
#include "tpcount/polytope.hpp"

namespace tpcount {

struct RunConfig {
  Mode mode = Mode::Integer;
  /// Path of the margin document; "-" reads stdin.
  std::string input = "-";
  double tol = 1e-10;
  bool exact = false;
  /// Grid points per axis for the quadrature check; power of two in [16, 512].
  std::optional<int> verify_grid;
  bool diagnostics = false;
  std::uint64_t seed = 0;
  std::uint64_t budget = 200'000'000ULL;
  /// Empty writes to stdout.
  std::string output;
  /// Wall-clock timings make reports differ between runs, so they are opt-in.
  bool timings = false;
};

struct RunResult {
  int exit_code = 0;
  nlohmann::ordered_json report;
};

/// Parses {"nu": int, "dims": [...], "margins": [[...], ...]}. Throws
/// ParseError on malformed documents.
MarginSpec parse_spec(const nlohmann::json& doc);
MarginSpec parse_spec_text(const std::string& text);

/// 2 for input and validation errors, 3 for solver failures, 4 for budget
/// exhaustion.
int exit_code_for(ErrorKind kind);

/// Runs the pipeline on an already parsed document. Never throws for
/// pipeline errors; they become the `error` block and the exit code.
RunResult run(const RunConfig& config, const nlohmann::json& input);

/// Reads config.input and runs. Input read failures map to exit code 2.
RunResult run(const RunConfig& config);

}  // namespace tpcount
