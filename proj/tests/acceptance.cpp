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

// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "tpcount/diagnostics.hpp"
#include "tpcount/estimator.hpp"
#include "tpcount/oracle.hpp"
#include "tpcount/quadrature.hpp"
#include "tpcount/report.hpp"

using namespace tpcount;
using tpcount::testing::make_spec;
using tpcount::testing::polystochastic;
using tpcount::testing::random_integer_spec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome integer_identity() {
  const auto start = std::chrono::steady_clock::now();
  const auto spec = polystochastic({2, 2, 2}, 1.0);
  const auto q64 = verify_integral_representation(spec, Mode::Integer, 64);
  const auto q128 = verify_integral_representation(spec, Mode::Integer, 128);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream os;
  os << "exact=" << q64.exact_count << " rel64=" << q64.rel_error << " rel128=" << q128.rel_error
     << " seconds=" << secs;
  return {q64.exact_count == 57 && q64.rel_error <= 1e-3 && q128.rel_error <= 1e-5 && secs < 30.0,
          os.str()};
}

Outcome binary_identity() {
  const auto q = verify_integral_representation(polystochastic({2, 2, 2}, 0.5), Mode::Binary, 64);
  const double imag_rel = std::abs(q.imag) / std::abs(q.value);
  std::ostringstream os;
  os << "exact=" << q.exact_count << " value=" << q.value << " rel=" << q.rel_error
     << " imag_rel=" << imag_rel;
  return {q.exact_count == 8 && q.rel_error <= 1e-3 && imag_rel <= 1e-8, os.str()};
}

Outcome symmetric_max_entropy() {
  bool ok = true;
  double worst_z = 0.0, worst_g = 0.0;
  for (const std::vector<int>& dims :
       {std::vector<int>{2, 2, 2}, {3, 3, 3}, {4, 4, 4}, {2, 2, 2, 2}}) {
    for (double c : {0.5, 1.0, 3.0}) {
      ConstraintSystem cs(polystochastic(dims, c));
      const auto sol = solve_geometric(cs);
      const double closed = cs.cells() * ((c + 1) * std::log(c + 1) - c * std::log(c));
      const double dz = (sol.z.array() - c).abs().maxCoeff();
      const double dg = std::abs(sol.gz - closed);
      worst_z = std::max(worst_z, dz);
      worst_g = std::max(worst_g, dg);
      ok = ok && dz <= 1e-8 && dg <= 1e-8;
    }
  }
  std::ostringstream os;
  os << "max|z-c|=" << worst_z << " max|g-closed|=" << worst_g;
  return {ok, os.str()};
}

Outcome spectrum_closed_form() {
  ConstraintSystem cs(polystochastic({2, 2, 2}, 1.0));
  const auto s = restricted_spectrum(quadratic_form(cs, Eigen::VectorXd::Ones(8)), cs);
  const double root = std::sqrt(17.0);
  const double expected[4] = {5 + root, 4.0, 2.0, 5 - root};
  double err = 0.0;
  for (int i = 0; i < 4; ++i) err = std::max(err, std::abs(s.eigenvalues[i] - expected[i]));
  const double det = std::exp(s.logdet);
  const bool bounds = check_eigenvalue_bounds(cs, s, shape_witnesses(cs.dims(), 1.0, 1.0)).ok;
  std::ostringstream os;
  os << "max eigenvalue error=" << err << " det=" << det << " bounds=" << (bounds ? "ok" : "violated");
  return {err <= 1e-9 && std::abs(det - 64.0) <= 1e-9 && bounds, os.str()};
}

Outcome eigenvalue_property_suite() {
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<int> k1(2, 6), k2(2, 5), k3(2, 4);
  const double rs[2] = {0.25, 1.0};
  const double Rs[2] = {1.0, 4.0};
  int failures = 0;
  std::string first_failure;
  for (int i = 0; i < 100; ++i) {
    const std::vector<int> dims{k1(rng), k2(rng), k3(rng)};
    const double r = rs[i % 2];
    const double R = Rs[(i / 2) % 2];
    ConstraintSystem cs(polystochastic(dims, 1.0));
    std::uniform_real_distribution<double> u(r, R);
    Eigen::VectorXd alpha(static_cast<Eigen::Index>(cs.cells()));
    for (Eigen::Index c = 0; c < alpha.size(); ++c) alpha[c] = u(rng);
    const QuadraticForm qf = quadratic_form(cs, alpha);
    const Witnesses w = shape_witnesses(dims, r, R);
    const GaussianModel model = covariance_model(qf, cs);
    const bool ok = check_eigenvalue_bounds(cs, restricted_spectrum(qf, cs), w).ok &&
                    check_kernel_projection_norms(dims).ok && check_variance_bound(model, cs, w).ok &&
                    check_correlation_bounds(model, cs, w).ok;
    if (!ok) {
      if (failures == 0) {
        std::ostringstream os;
        os << " first failure dims=" << dims[0] << "x" << dims[1] << "x" << dims[2] << " r=" << r
           << " R=" << R;
        first_failure = os.str();
      }
      ++failures;
    }
  }
  return {failures == 0, "instances=100 failures=" + std::to_string(failures) + first_failure};
}

Outcome third_degree() {
  ConstraintSystem bcs(polystochastic({2, 2, 2}, 0.5));
  const auto bsol = solve_bernoulli(bcs);
  const auto bmodel = covariance_model(build_q(bsol, bcs), bcs);
  const CheckReport sym = check_third_degree_term(bmodel, IntegrandContext(bcs, bsol), 0);

  ConstraintSystem cs(polystochastic({3, 3, 3}, 1.0));
  const auto sol = solve_geometric(cs);
  const auto model = covariance_model(build_q(sol, cs), cs);
  const CheckReport rep = check_third_degree_term(model, IntegrandContext(cs, sol), 0, 100000);
  std::ostringstream os;
  os << "binary |E e^{iU}-1|=" << sym.value("mc_abs_phase_minus_one")
     << " integer |E e^{iU}-1|=" << rep.value("mc_abs_phase_minus_one")
     << " half E U^2=" << rep.value("half_expected_u2") << " se=" << rep.value("mc_phase_se");
  const bool exact_one = sym.value("mc_abs_phase_minus_one") == 0.0 && sym.value("expected_u2") == 0.0;
  return {exact_one && sym.ok && rep.ok, os.str()};
}

MarginSpec complement(const MarginSpec& spec) {
  MarginSpec out = spec;
  const auto sizes = slice_sizes(spec.dims);
  for (std::size_t j = 0; j < spec.dims.size(); ++j) {
    for (double& v : out.margins[j]) v = sizes[j] - v;
  }
  return out;
}

Outcome oracle_consistency() {
  std::mt19937_64 rng(99);
  int agreed = 0, compared = 0, symmetric = 0, binary_cases = 0;
  for (const std::vector<int>& dims :
       {std::vector<int>{2, 2, 2}, {3, 2, 2}, {2, 3, 2}, {3, 3, 2}, {2, 2, 2, 2}, {4, 2, 2}}) {
    for (int t = 0; t < 2; ++t) {
      const MarginSpec spec = random_integer_spec(dims, 2, rng);
      ++compared;
      if (count_integer_exact(spec) == count_by_slice_fold(spec, Mode::Integer).count) ++agreed;
      const MarginSpec bin = random_integer_spec(dims, 1, rng);
      ++binary_cases;
      if (count_binary_exact(bin) == count_binary_exact(complement(bin))) ++symmetric;
    }
  }
  std::ostringstream os;
  os << "fold agreement " << agreed << "/" << compared << ", complement symmetry " << symmetric << "/"
     << binary_cases;
  return {compared >= 10 && agreed == compared && symmetric == binary_cases, os.str()};
}

Outcome estimate_trend() {
  const CountEstimate est = estimate_binary(polystochastic({2, 2, 2}, 0.5));
  const double expected = std::exp(8 * std::log(2.0)) / (4 * std::numbers::pi * std::numbers::pi * 0.5);
  const double exact = count_binary_exact(polystochastic({2, 2, 2}, 0.5)).convert_to<double>();
  std::ostringstream os;
  os << "estimate=" << *est.estimate << " closed form=" << expected << " exact=" << exact
     << " ratio=" << *est.estimate / exact << " satisfied=" << (est.hypothesis.satisfied ? "true" : "false");
  return {std::abs(*est.estimate - expected) <= 1e-9 * expected && !est.hypothesis.satisfied,
          os.str()};
}

Outcome determinism() {
  const auto doc =
      nlohmann::json::parse(R"({"nu": 3, "dims": [3, 2, 2], "margins": [[2, 2, 2], [3, 3], [3, 3]]})");
  RunConfig c;
  c.mode = Mode::Integer;
  c.exact = true;
  c.verify_grid = 32;
  c.diagnostics = true;
  c.seed = 5;
  const std::string a = run(c, doc).report.dump(2);
  const std::string b = run(c, doc).report.dump(2);
  return {a == b, "report bytes=" + std::to_string(a.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"integral representation, integer 2x2x2", integer_identity},
      {"integral representation, binary 2x2x2", binary_identity},
      {"max-entropy exactness on symmetric margins", symmetric_max_entropy},
      {"restricted spectrum closed form", spectrum_closed_form},
      {"eigenvalue-bound property suite", eigenvalue_property_suite},
      {"third-degree term", third_degree},
      {"oracle self-consistency", oracle_consistency},
      {"estimate sanity on binary 2x2x2", estimate_trend},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome out;
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %s  (%s)\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str());
    if (!out.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
