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

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tpcount/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Estimate and count lattice points of multi-index transportation polytopes"};
  tpcount::RunConfig config;
  std::string mode;
  app.add_option("--mode", mode, "integer or binary")
      ->required()
      ->check(CLI::IsMember({"integer", "binary"}));
  app.add_option("--input", config.input, "margin document (default stdin)");
  app.add_option("--tol", config.tol, "solver tolerance");
  app.add_flag("--exact", config.exact, "run the exact counter");
  app.add_option("--verify-integral", config.verify_grid, "quadrature grid points per axis");
  app.add_flag("--diagnostics", config.diagnostics, "run the Gaussian diagnostics");
  app.add_option("--seed", config.seed, "seed for sampled checks");
  app.add_option("--budget", config.budget, "node cap for the exact counter");
  app.add_option("--output", config.output, "report path (default stdout)");
  app.add_flag("--timings", config.timings, "include wall-clock timings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  config.mode = mode == "binary" ? tpcount::Mode::Binary : tpcount::Mode::Integer;

  const tpcount::RunResult result = tpcount::run(config);
  const std::string text = result.report.dump(2) + "\n";
  if (config.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(config.output, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << config.output << "\n";
      return 2;
    }
    out << text;
  }
  if (result.exit_code != 0 && result.report.contains("error")) {
    std::cerr << result.report["error"]["kind"].get<std::string>() << ": "
              << result.report["error"]["message"].get<std::string>() << "\n";
  }
  return result.exit_code;
}
