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

#include "tpcount/errors.hpp"

namespace tpcount {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnequalTotals: return "UnequalTotals";
    case ErrorKind::NonPositiveMargin: return "NonPositiveMargin";
    case ErrorKind::BinaryCapacityExceeded: return "BinaryCapacityExceeded";
    case ErrorKind::NonIntegerMargins: return "NonIntegerMargins";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SpectrumDegenerate: return "SpectrumDegenerate";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::PoleEncountered: return "PoleEncountered";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::OutOfExpansionRadius: return "OutOfExpansionRadius";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string_view to_string(Mode mode) {
  return mode == Mode::Integer ? "integer" : "binary";
}

}  // namespace tpcount
