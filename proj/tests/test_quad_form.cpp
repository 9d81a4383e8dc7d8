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
#include <numbers>
#include <random>

#include "support.hpp"
#include "tpcount/quad_form.hpp"

using namespace tpcount;
using tpcount::testing::polystochastic;

namespace {

Eigen::VectorXd uniform_weights(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd a(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = u(rng);
  return a;
}

}  // namespace

TEST_CASE("2x2x2 with unit weights") {
  ConstraintSystem cs(polystochastic({2, 2, 2}, 1.0));
  const QuadraticForm qf = quadratic_form(cs, Eigen::VectorXd::Ones(8));
  CHECK(qf.B(0, 0) == doctest::Approx(4.0));
  CHECK(qf.B(0, 2) == doctest::Approx(2.0));
  CHECK(qf.B(0, 1) == doctest::Approx(0.0));

  const RestrictedSpectrum s = restricted_spectrum(qf, cs);
  REQUIRE(s.dim_l() == 4);
  const double root = std::sqrt(17.0);
  CHECK(s.eigenvalues[0] == doctest::Approx(5 + root).epsilon(1e-12));
  CHECK(s.eigenvalues[1] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(s.eigenvalues[2] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.eigenvalues[3] == doctest::Approx(5 - root).epsilon(1e-12));
  CHECK(std::exp(s.logdet) == doctest::Approx(64.0).epsilon(1e-12));
  CHECK(s.full_eigenvalues.size() == 6);
  CHECK(std::abs(s.full_eigenvalues[5]) < 1e-12);

  // Eigenvectors live in L and are orthonormal.
  for (int r : cs.removed_rows()) CHECK(s.eigenvectors.row(r).norm() == doctest::Approx(0.0));
  CHECK((s.eigenvectors.transpose() * s.eigenvectors - Eigen::MatrixXd::Identity(4, 4)).norm() <
        1e-12);

  const auto bounds = check_eigenvalue_bounds(cs, s, shape_witnesses(cs.dims(), 1.0, 1.0));
  CHECK(bounds.small.ok);
  CHECK(bounds.large.ok);
  CHECK(bounds.middle.ok);
  CHECK(bounds.ok);
}

TEST_CASE("nonpositive weights are rejected") {
  ConstraintSystem cs(polystochastic({2, 2, 2}, 1.0));
  Eigen::VectorXd a = Eigen::VectorXd::Ones(8);
  a[3] = 0.0;
  CHECK_THROWS_AS(quadratic_form(cs, a), Error);
  CHECK_THROWS_AS(quadratic_form(cs, Eigen::VectorXd::Ones(7)), Error);
}

TEST_CASE("spectrum scales with the weights") {
  std::mt19937_64 rng(3);
  ConstraintSystem cs(polystochastic({3, 2, 4}, 1.0));
  const Eigen::VectorXd a = uniform_weights(cs.cells(), 0.5, 2.0, rng);
  const auto s1 = restricted_spectrum(quadratic_form(cs, a), cs);
  const auto s3 = restricted_spectrum(quadratic_form(cs, 3.0 * a), cs);
  CHECK((s3.eigenvalues - 3.0 * s1.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(s3.logdet == doctest::Approx(s1.logdet + cs.dim_l() * std::log(3.0)));
}

TEST_CASE("B is the sum of rank-one cell terms") {
  std::mt19937_64 rng(5);
  ConstraintSystem cs(polystochastic({2, 3, 2}, 1.0));
  const Eigen::VectorXd a = uniform_weights(cs.cells(), 0.25, 4.0, rng);
  const Eigen::MatrixXd m = cs.dense_matrix();
  const Eigen::MatrixXd expected = m * a.asDiagonal() * m.transpose();
  CHECK((quadratic_form(cs, a).B - expected).norm() < 1e-12);
}

TEST_CASE("Gaussian integral matches the determinant") {
  ConstraintSystem cs(polystochastic({2, 2, 2}, 1.0));
  const auto s = restricted_spectrum(quadratic_form(cs, Eigen::VectorXd::Ones(8)), cs);
  CHECK(gaussian_log_integral(s) == doctest::Approx(2 * std::log(2 * std::numbers::pi) - 0.5 * std::log(64.0)));
}

TEST_CASE("eigenvalue bounds and the integral lower bound on random weights") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> side(2, 5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::vector<int> dims{side(rng), side(rng), side(rng)};
    ConstraintSystem cs(polystochastic(dims, 1.0));
    const double r = trial % 2 ? 0.25 : 1.0;
    const double R = trial % 3 ? 4.0 : 1.0;
    const auto s = restricted_spectrum(quadratic_form(cs, uniform_weights(cs.cells(), r, R, rng)), cs);
    const Witnesses w = shape_witnesses(dims, r, R);
    const auto bounds = check_eigenvalue_bounds(cs, s, w);
    CHECK_MESSAGE(bounds.ok, "dims " << dims[0] << "x" << dims[1] << "x" << dims[2]);
    CHECK(gaussian_log_integral(s) >= lower_bound_gaussian_integral(3, w.k, R));
  }
}

TEST_CASE("witnesses") {
  const Witnesses w = shape_witnesses(std::vector<int>{4, 3, 2}, 0.5, 2.0);
  CHECK(w.k == 4.0);
  CHECK(w.omega == doctest::Approx(0.5));
  CHECK(w.r == 0.5);
  CHECK(w.R == 2.0);
}
