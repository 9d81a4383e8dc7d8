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

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "support.hpp"
#include "tpcount/max_entropy.hpp"

using namespace tpcount;
using tpcount::testing::make_spec;
using tpcount::testing::polystochastic;
using tpcount::testing::random_integer_spec;

namespace {

double geometric_cell(double c) { return (c + 1) * std::log(c + 1) - c * std::log(c); }
double bernoulli_cell(double c) { return -c * std::log(c) - (1 - c) * std::log(1 - c); }

// A random direction d with A d = 0.
Eigen::VectorXd kernel_direction(const ConstraintSystem& cs, std::mt19937_64& rng) {
  const Eigen::MatrixXd a = cs.dense_matrix();
  const Eigen::MatrixXd null = Eigen::FullPivLU<Eigen::MatrixXd>(a).kernel();
  std::normal_distribution<double> g;
  Eigen::VectorXd coeff(null.cols());
  for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff[i] = g(rng);
  Eigen::VectorXd d = null * coeff;
  return d / d.norm();
}

}  // namespace

TEST_CASE("entropy functions") {
  const std::vector<double> x{1.0, 2.0, 0.0};
  CHECK(entropy_geometric(x) == doctest::Approx(2 * std::log(2.0) + 3 * std::log(3.0) - 2 * std::log(2.0)));
  const std::vector<double> p{0.5, 0.0, 1.0};
  CHECK(entropy_bernoulli(p) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(entropy_geometric(std::vector<double>{-0.1}), Error);
  CHECK_THROWS_AS(entropy_bernoulli(std::vector<double>{1.1}), Error);
  try {
    entropy_geometric(std::vector<double>{-1.0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NegativeEntry);
  }
  try {
    entropy_bernoulli(std::vector<double>{-0.5});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfRange);
  }
}

TEST_CASE("symmetric margins give constant means") {
  for (const std::vector<int>& dims : {std::vector<int>{2, 2, 2}, {3, 3, 3}, {4, 4, 4}, {2, 2, 2, 2}}) {
    for (double c : {0.3, 1.0, 2.5}) {
      ConstraintSystem cs(polystochastic(dims, c));
      const auto sol = solve_geometric(cs);
      CHECK((sol.z.array() - c).abs().maxCoeff() <= 1e-8);
      CHECK(sol.gz == doctest::Approx(cs.cells() * geometric_cell(c)).epsilon(1e-10));
    }
    for (double c : {0.2, 0.5, 0.9}) {
      ConstraintSystem cs(polystochastic(dims, c));
      const auto sol = solve_bernoulli(cs);
      CHECK((sol.z.array() - c).abs().maxCoeff() <= 1e-8);
      CHECK(sol.gz == doctest::Approx(cs.cells() * bernoulli_cell(c)).epsilon(1e-10));
    }
  }
}

TEST_CASE("solution satisfies the margins and maximizes entropy along the fiber") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    const std::vector<int> dims{2 + trial % 3, 2 + trial % 2, 3};
    const MarginSpec spec = random_integer_spec(dims, 5, rng);
    ConstraintSystem cs(spec);
    bool positive = true;
    for (const auto& row : spec.margins) {
      for (double v : row) positive = positive && v > 0;
    }
    if (!positive) continue;
    for (Mode mode : {Mode::Integer, Mode::Binary}) {
      MarginSpec scaled = spec;
      if (mode == Mode::Binary) {
        // Margins of (x + 1) / 7, whose entries lie strictly inside (0, 1).
        const auto sizes = slice_sizes(dims);
        for (std::size_t j = 0; j < dims.size(); ++j) {
          for (double& v : scaled.margins[j]) v = (v + sizes[j]) / 7.0;
        }
      }
      ConstraintSystem sys(scaled);
      const auto sol = solve_max_entropy(sys, mode);
      const double threshold = 1e-10 * std::max(1.0, sys.b().cwiseAbs().maxCoeff());
      CHECK(sol.kkt_residual <= threshold);
      CHECK((sys.apply(sol.z) - sys.b()).cwiseAbs().maxCoeff() <= threshold);
      CHECK(sol.gz == doctest::Approx(entropy(mode, sol.z)).epsilon(1e-12));
      CHECK(sol.z.minCoeff() > 0.0);
      if (mode == Mode::Binary) CHECK(sol.z.maxCoeff() < 1.0);
      const Eigen::VectorXd d = kernel_direction(sys, rng);
      for (double eps : {1e-3, -1e-3}) {
        const Eigen::VectorXd moved = sol.z + eps * d;
        if (moved.minCoeff() <= 0.0 || (mode == Mode::Binary && moved.maxCoeff() >= 1.0)) continue;
        CHECK(entropy(mode, moved) <= sol.gz + 1e-12);
      }
      // The multipliers reproduce z and vanish on removed rows.
      CHECK((means_from_multipliers(sys, mode, sol.lambda) - sol.z).cwiseAbs().maxCoeff() <= 1e-9);
      for (int r : sys.removed_rows()) CHECK(sol.lambda[r] == 0.0);
    }
  }
}

TEST_CASE("dual objective agrees with the primal value at the optimum") {
  ConstraintSystem cs(make_spec({2, 3, 2}, {{5, 7}, {3, 4, 5}, {6, 6}}));
  const auto sol = solve_geometric(cs);
  CHECK(dual_objective(cs, Mode::Integer, sol.lambda) == doctest::Approx(sol.gz).epsilon(1e-10));
  CHECK(std::isinf(dual_objective(cs, Mode::Integer, Eigen::VectorXd::Constant(cs.rows(), -1.0))));
}

TEST_CASE("relabeling indices permutes the solution") {
  ConstraintSystem a(make_spec({2, 3, 2}, {{5, 7}, {3, 4, 5}, {6, 6}}));
  ConstraintSystem b(make_spec({2, 3, 2}, {{7, 5}, {5, 4, 3}, {6, 6}}));
  const auto sa = solve_geometric(a);
  const auto sb = solve_geometric(b);
  CHECK(sa.gz == doctest::Approx(sb.gz).epsilon(1e-12));
  for (std::size_t c = 0; c < a.cells(); ++c) {
    auto idx = a.multi_index(c);
    idx[0] = 1 - idx[0];
    idx[1] = 2 - idx[1];
    CHECK(sa.z[static_cast<Eigen::Index>(c)] ==
          doctest::Approx(sb.z[static_cast<Eigen::Index>(b.flat_index(idx))]).epsilon(1e-9));
  }
}

TEST_CASE("boundary margins are infeasible") {
  ConstraintSystem zero(make_spec({2, 2, 2}, {{4, 0}, {2, 2}, {2, 2}}));
  CHECK_THROWS_AS(solve_geometric(zero), Error);
  ConstraintSystem full(make_spec({2, 2, 2}, {{4, 2}, {3, 3}, {3, 3}}));
  try {
    solve_bernoulli(full);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Infeasible);
  }
}
