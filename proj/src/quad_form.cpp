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

#include "tpcount/quad_form.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace tpcount {
namespace {

constexpr double kSlack = 1e-9;

bool within(double x, double lo, double hi) {
  const double tol = kSlack * std::max({1.0, std::abs(lo), std::abs(hi)});
  return x >= lo - tol && x <= hi + tol;
}

BoundGroup make_group(std::string name, double lo, double hi, std::vector<double> values) {
  BoundGroup g{std::move(name), lo, hi, std::move(values), true};
  for (double v : g.values) g.ok = g.ok && within(v, lo, hi);
  return g;
}

// Flip each column so its largest-magnitude entry is positive.
void normalize_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index arg = 0;
    vectors.col(c).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
  }
}

}  // namespace

QuadraticForm quadratic_form(const ConstraintSystem& cs, const Eigen::VectorXd& alpha, Mode mode) {
  if (static_cast<std::size_t>(alpha.size()) != cs.cells()) {
    throw Error(ErrorKind::LengthMismatch, "weight vector length does not match the cell count");
  }
  QuadraticForm qf;
  qf.mode = mode;
  qf.alpha = alpha;
  qf.B = Eigen::MatrixXd::Zero(cs.rows(), cs.rows());
  for (std::size_t c = 0; c < cs.cells(); ++c) {
    const double a = alpha[static_cast<Eigen::Index>(c)];
    if (!(a > 0.0)) throw Error(ErrorKind::OutOfRange, "quadratic form weights must be positive");
    const auto rows = cs.cell_rows(c);
    for (int i : rows) {
      for (int j : rows) qf.B(i, j) += a;
    }
  }
  return qf;
}

QuadraticForm build_q(const MaxEntropySolution& solution, const ConstraintSystem& cs) {
  const auto& z = solution.z;
  const Eigen::VectorXd alpha = solution.mode == Mode::Integer
                                    ? Eigen::VectorXd(z + z.cwiseProduct(z))
                                    : Eigen::VectorXd(z - z.cwiseProduct(z));
  return quadratic_form(cs, alpha, solution.mode);
}

RestrictedSpectrum restricted_spectrum(const QuadraticForm& qf, const ConstraintSystem& cs) {
  const int dim_l = cs.dim_l();
  const auto& retained = cs.retained_rows();

  // QBQ zeroes the removed rows and columns, so its eigenpairs split into
  // the retained block and unit vectors on the removed coordinates.
  Eigen::MatrixXd block(dim_l, dim_l);
  for (int i = 0; i < dim_l; ++i) {
    for (int j = 0; j < dim_l; ++j) block(i, j) = qf.B(retained[i], retained[j]);
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::SpectrumDegenerate, "eigensolver failed");
  }

  RestrictedSpectrum spec;
  spec.eigenvalues = solver.eigenvalues().reverse();
  Eigen::MatrixXd local = solver.eigenvectors().rowwise().reverse();
  normalize_signs(local);
  spec.eigenvectors = Eigen::MatrixXd::Zero(cs.rows(), dim_l);
  for (int i = 0; i < dim_l; ++i) spec.eigenvectors.row(retained[i]) = local.row(i);

  spec.full_eigenvalues = Eigen::VectorXd::Zero(cs.rows());
  spec.full_eigenvalues.head(dim_l) = spec.eigenvalues;
  std::sort(spec.full_eigenvalues.data(), spec.full_eigenvalues.data() + cs.rows(),
            std::greater<>());

  const double top = std::max(spec.eigenvalues.size() ? spec.eigenvalues[0] : 0.0, 0.0);
  for (int i = 0; i < dim_l; ++i) {
    if (!(spec.eigenvalues[i] > 1e-9 * top)) {
      std::ostringstream os;
      os << "restricted eigenvalue " << spec.eigenvalues[i] << " is not positive (largest "
         << top << ")";
      throw Error(ErrorKind::SpectrumDegenerate, os.str());
    }
    spec.logdet += std::log(spec.eigenvalues[i]);
  }
  return spec;
}

Witnesses shape_witnesses(std::span<const int> dims, double r, double R) {
  const auto [lo, hi] = std::minmax_element(dims.begin(), dims.end());
  return Witnesses{r, R, static_cast<double>(*lo) / *hi, static_cast<double>(*hi)};
}

EigenvalueBoundReport check_eigenvalue_bounds(const ConstraintSystem& cs,
                                              const RestrictedSpectrum& spectrum,
                                              const Witnesses& w) {
  const int nu = cs.nu();
  const int dim_l = spectrum.dim_l();
  const double nud = nu;
  const double k1 = std::pow(w.k, nu - 1);
  const double k2 = std::pow(w.k, nu - 2);
  const double om1 = std::pow(w.omega, nu - 1);
  const auto& ev = spectrum.eigenvalues;

  std::vector<double> large{ev[0]};
  std::vector<double> middle(ev.data() + 1, ev.data() + (dim_l - (nu - 1)));
  std::vector<double> small(ev.data() + (dim_l - (nu - 1)), ev.data() + dim_l);

  EigenvalueBoundReport report;
  report.small = make_group("small", w.r * om1 * k2 / (nud * (nud - 1.0)), w.R / w.omega * k2,
                            std::move(small));
  report.large = make_group("large", 0.5 * w.r * om1 * nud * k1, w.R * nud * k1, std::move(large));
  report.middle = make_group("middle", w.r * om1 * k1, w.R * k1, std::move(middle));

  // Separation between the small group and the next eigenvalue up.
  const double first_small = ev[dim_l - (nu - 1)];
  const double above = ev[dim_l - nu];
  report.distance_bound = w.R / w.r * std::pow(w.omega, -nud) / w.k;
  if ((above - first_small) > 1e-6 * above) {
    report.distance_checked = true;
    const KernelBasis kernel = kernel_basis(cs.dims());
    for (int i = dim_l - (nu - 1); i < dim_l; ++i) {
      const Eigen::VectorXd v = spectrum.eigenvectors.col(i);
      const double d2 = (v - kernel.project(v)).squaredNorm();
      report.distances.push_back(d2);
      report.distance_ok = report.distance_ok && d2 <= report.distance_bound * (1.0 + kSlack);
    }
  }
  report.ok = report.small.ok && report.large.ok && report.middle.ok && report.distance_ok;
  return report;
}

double gaussian_log_integral(const RestrictedSpectrum& spectrum) {
  return 0.5 * spectrum.dim_l() * std::log(2.0 * std::numbers::pi) - 0.5 * spectrum.logdet;
}

double lower_bound_gaussian_integral(int nu, double k, double R) {
  return -0.25 * nu * nu * k * std::log(k) - 0.5 * nu * k * std::log(R);
}

}  // namespace tpcount
