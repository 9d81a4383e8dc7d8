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

#include "tpcount/report.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "tpcount/diagnostics.hpp"
#include "tpcount/estimator.hpp"
#include "tpcount/oracle.hpp"
#include "tpcount/quadrature.hpp"

namespace tpcount {
namespace {

using ojson = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

ojson hypothesis_json(const HypothesisReport& h) {
  ojson j;
  j["mode"] = to_string(h.mode);
  j["nu"] = h.nu;
  j["r"] = h.r;
  j["R"] = h.R;
  j["omega"] = h.omega;
  j["k"] = h.k;
  j["ineq1_lhs"] = h.ineq1_lhs;
  j["ineq1_rhs"] = h.ineq1_rhs;
  j["ineq1_ok"] = h.ineq1_ok;
  j["ineq2_lhs"] = h.ineq2_lhs;
  j["ineq2_rhs"] = h.ineq2_rhs;
  j["ineq2_ok"] = h.ineq2_ok;
  j["omega_k_ok"] = h.omega_k_ok;
  j["R_ok"] = h.R_ok;
  j["gamma"] = h.gamma;
  j["rel_error_bound"] = h.rel_error_bound;
  j["gamma_asymptotic_only"] = h.gamma_asymptotic_only;
  j["satisfied"] = h.satisfied;
  return j;
}

ojson diagnostics_json(const DiagnosticsReport& d) {
  ojson checks = ojson::object();
  for (const auto& c : d.checks) {
    ojson values = ojson::object();
    for (const auto& [k, v] : c.values) values[k] = v;
    checks[c.name] = {{"ok", c.ok}, {"max_ratio", c.max_ratio}, {"values", values}};
  }
  return {{"ok", d.ok}, {"checks", checks}};
}

ojson echo_json(const RunConfig& config, const MarginSpec& spec) {
  ojson j;
  j["mode"] = to_string(config.mode);
  j["nu"] = spec.nu;
  j["dims"] = spec.dims;
  j["margins"] = spec.margins;
  j["tol"] = config.tol;
  j["exact"] = config.exact;
  j["verify_integral"] = config.verify_grid ? ojson(*config.verify_grid) : ojson(nullptr);
  j["diagnostics"] = config.diagnostics;
  j["seed"] = config.seed;
  j["budget"] = config.budget;
  return j;
}

void check_config(const RunConfig& config) {
  if (!(config.tol > 0.0) || !std::isfinite(config.tol)) {
    throw Error(ErrorKind::InvalidConfig, "tol must be a positive finite number");
  }
  if (config.verify_grid) {
    const int g = *config.verify_grid;
    if (g < 16 || g > 512 || (g & (g - 1)) != 0) {
      throw Error(ErrorKind::InvalidConfig, "grid size must be a power of two in [16, 512]");
    }
  }
  if (config.budget == 0) throw Error(ErrorKind::InvalidConfig, "budget must be positive");
}

}  // namespace

MarginSpec parse_spec(const nlohmann::json& doc) {
  try {
    if (!doc.is_object()) throw Error(ErrorKind::ParseError, "spec must be an object");
    for (const char* key : {"nu", "dims", "margins"}) {
      if (!doc.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing field ") + key);
    }
    if (!doc["nu"].is_number_integer()) throw Error(ErrorKind::ParseError, "nu must be an integer");
    MarginSpec spec;
    spec.nu = doc["nu"].get<int>();
    for (const auto& d : doc["dims"]) {
      if (!d.is_number_integer()) throw Error(ErrorKind::ParseError, "dims must be integers");
      spec.dims.push_back(d.get<int>());
    }
    for (const auto& row : doc["margins"]) {
      std::vector<double> m;
      for (const auto& v : row) {
        if (!v.is_number()) throw Error(ErrorKind::ParseError, "margins must be numbers");
        m.push_back(v.get<double>());
      }
      spec.margins.push_back(std::move(m));
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

MarginSpec parse_spec_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  return parse_spec(doc);
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BudgetExceeded:
      return 4;
    case ErrorKind::Infeasible:
    case ErrorKind::NoConvergence:
    case ErrorKind::SpectrumDegenerate:
    case ErrorKind::PoleEncountered:
    case ErrorKind::QuadratureNotConverged:
    case ErrorKind::OutOfExpansionRadius:
      return 3;
    default:
      return 2;
  }
}

RunResult run(const RunConfig& config, const nlohmann::json& input) {
  RunResult result;
  ojson& out = result.report;
  ojson timings = ojson::object();
  const auto started = Clock::now();
  try {
    check_config(config);
    const MarginSpec spec = parse_spec(input);
    out["input_echo"] = echo_json(config, spec);

    SolverOptions solver;
    solver.tol = config.tol;
    auto t0 = Clock::now();
    const CountEstimate est = estimate(spec, config.mode, solver);
    timings["estimate"] = elapsed_ms(t0);

    const auto& z = est.solution.z;
    out["solution"] = {{"g_z", est.solution.gz},
                       {"kkt_residual", est.solution.kkt_residual},
                       {"z_min", z.minCoeff()},
                       {"z_max", z.maxCoeff()},
                       {"iterations", est.solution.iterations}};
    out["spectrum"] = {{"dimL", est.dim_l},
                       {"logdet", est.spectrum.logdet},
                       {"eigen_min", est.spectrum.eigenvalues.minCoeff()},
                       {"eigen_max", est.spectrum.eigenvalues.maxCoeff()}};
    out["estimate"] = {{"log_e", est.log_estimate},
                       {"log10", est.log10_estimate},
                       {"value_or_capped", est.estimate ? ojson(*est.estimate) : ojson("capped")}};
    out["hypothesis"] = hypothesis_json(est.hypothesis);

    if (config.exact) {
      t0 = Clock::now();
      CountOptions co;
      co.budget = config.budget;
      const CountResult exact = count_exact(spec, config.mode, co);
      timings["exact"] = elapsed_ms(t0);
      ojson block;
      block["count"] = exact.count.str();
      block["nodes"] = exact.nodes;
      const double count = exact.count.convert_to<double>();
      if (count > 0.0) block["log_ratio_estimate_to_exact"] = est.log_estimate - std::log(count);
      if (count > 0.0 && est.estimate) block["ratio_estimate_to_exact"] = *est.estimate / count;
      out["exact"] = block;
    }

    if (config.verify_grid) {
      t0 = Clock::now();
      CountOptions co;
      co.budget = config.budget;
      const QuadratureReport q =
          verify_integral_representation(spec, config.mode, *config.verify_grid, {}, co, solver);
      timings["quadrature"] = elapsed_ms(t0);
      out["quadrature"] = {{"value", q.value},
                           {"imag", q.imag},
                           {"rel_error", q.rel_error},
                           {"grid", q.grid},
                           {"coarse_value", q.coarse_value},
                           {"refinement_delta", q.refinement_delta},
                           {"exact_count", q.exact_count.str()}};
    }

    if (config.diagnostics) {
      t0 = Clock::now();
      const DiagnosticsReport d = run_diagnostics(est, ConstraintSystem(spec), config.seed);
      timings["diagnostics"] = elapsed_ms(t0);
      out["diagnostics"] = diagnostics_json(d);
    }
    result.exit_code = 0;
  } catch (const Error& e) {
    out["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    result.exit_code = exit_code_for(e.kind());
  }
  if (config.timings) {
    timings["total"] = elapsed_ms(started);
    out["timings_ms"] = timings;
  }
  return result;
}

RunResult run(const RunConfig& config) {
  std::string text;
  if (config.input == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(config.input, std::ios::binary);
    if (!in) {
      RunResult r;
      r.exit_code = 2;
      r.report["error"] = {{"kind", to_string(ErrorKind::ParseError)},
                           {"message", "cannot read " + config.input}};
      return r;
    }
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    RunResult r;
    r.exit_code = 2;
    r.report["error"] = {{"kind", to_string(ErrorKind::ParseError)}, {"message", e.what()}};
    return r;
  }
  return run(config, doc);
}

}  // namespace tpcount
