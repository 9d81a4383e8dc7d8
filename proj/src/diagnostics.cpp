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

#include "tpcount/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <random>

namespace tpcount {
namespace {

double omega_power(const Witnesses& w, double e) { return std::pow(w.omega, e); }

CheckReport eigenvalue_check(const EigenvalueBoundReport& bounds) {
  CheckReport rep;
  rep.name = "eigenvalue_bounds";
  rep.ok = bounds.ok;
  for (const BoundGroup* g : {&bounds.small, &bounds.large, &bounds.middle}) {
    for (double v : g->values) {
      rep.max_ratio = std::max({rep.max_ratio, v / g->upper, g->lower / v});
    }
    rep.values.emplace_back(g->name + "_ok", g->ok ? 1.0 : 0.0);
  }
  if (bounds.distance_checked) {
    double worst = 0.0;
    for (double d : bounds.distances) worst = std::max(worst, d);
    rep.values.emplace_back("max_kernel_distance", worst);
    rep.values.emplace_back("kernel_distance_bound", bounds.distance_bound);
  }
  return rep;
}

}  // namespace

double CheckReport::value(const std::string& key) const {
  for (const auto& [k, v] : values) {
    if (k == key) return v;
  }
  throw Error(ErrorKind::InvalidConfig, "no value named " + key + " in check " + name);
}

GaussianModel covariance_model(const QuadraticForm& qf, const ConstraintSystem& cs) {
  const RestrictedSpectrum spectrum = restricted_spectrum(qf, cs);
  const int dim = cs.dim_l();
  GaussianModel model;
  model.retained_rows = cs.retained_rows();
  model.precision.resize(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      model.precision(i, j) = qf.B(model.retained_rows[i], model.retained_rows[j]);
    }
  }
  Eigen::MatrixXd vectors(dim, dim);
  for (int i = 0; i < dim; ++i) vectors.row(i) = spectrum.eigenvectors.row(model.retained_rows[i]);
  model.precision_eigenvalues = spectrum.eigenvalues;
  const Eigen::VectorXd inv_sqrt = spectrum.eigenvalues.cwiseSqrt().cwiseInverse();
  model.factor = vectors * inv_sqrt.asDiagonal();
  model.covariance = model.factor * model.factor.transpose();
  model.covariance = 0.5 * (model.covariance + model.covariance.transpose());

  model.cell_map = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cs.cells()), dim);
  for (std::size_t c = 0; c < cs.cells(); ++c) {
    for (int r : cs.cell_rows(c)) {
      const int pos = cs.l_position(r);
      if (pos >= 0) model.cell_map(static_cast<Eigen::Index>(c), pos) = 1.0;
    }
  }
  return model;
}

CheckReport check_variance_bound(const GaussianModel& model, const ConstraintSystem& cs,
                                 const Witnesses& w) {
  const double nu = cs.nu();
  const double gamma = 14.0 * std::pow(nu, 4) * w.R / (omega_power(w, 6 * nu - 3) * w.r * w.r);
  const double bound = gamma / std::pow(w.k, nu - 1);
  const double max_var = model.covariance.diagonal().maxCoeff();
  CheckReport rep;
  rep.name = "variance";
  rep.max_ratio = max_var / bound;
  rep.ok = rep.max_ratio <= 1.0;
  rep.values = {{"max_variance", max_var}, {"bound", bound}, {"gamma", gamma}};
  return rep;
}

CheckReport check_correlation_bounds(const GaussianModel& model, const ConstraintSystem& cs,
                                     const Witnesses& w, std::uint64_t seed) {
  const int nu = cs.nu();
  const double base = std::pow(nu, 4) * w.R * w.R / (std::pow(w.r, 3) * omega_power(w, 7.0 * nu - 5));
  const double gamma = 14.0 * base;
  const double bound_any = gamma / std::pow(w.k, nu - 1);
  const double bound_distinct = gamma / std::pow(w.k, nu);
  const Eigen::MatrixXd cov = model.cell_map * model.covariance * model.cell_map.transpose();
  const auto n = static_cast<std::size_t>(cov.rows());

  double max_any = 0.0;
  double max_distinct = 0.0;
  std::size_t pairs = 0;
  auto visit = [&](std::size_t c, std::size_t d) {
    const double v = std::abs(cov(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(d)));
    max_any = std::max(max_any, v);
    const auto rc = cs.cell_rows(c);
    const auto rd = cs.cell_rows(d);
    bool distinct = true;
    for (int j = 0; j < nu; ++j) distinct = distinct && rc[j] != rd[j];
    if (distinct) max_distinct = std::max(max_distinct, v);
    ++pairs;
  };
  if (n <= 2000) {
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t d = c; d < n; ++d) visit(c, d);
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int i = 0; i < 1'000'000; ++i) visit(pick(rng), pick(rng));
  }

  CheckReport rep;
  rep.name = "correlation";
  const double ratio_any = max_any / bound_any;
  const double ratio_distinct = max_distinct / bound_distinct;
  rep.max_ratio = std::max(ratio_any, ratio_distinct);
  rep.ok = rep.max_ratio <= 1.0;
  rep.values = {{"max_abs", max_any},
                {"bound", bound_any},
                {"max_abs_distinct", max_distinct},
                {"bound_distinct", bound_distinct},
                {"gamma", gamma},
                {"ratio_with_constant_4", std::max(max_any / (4.0 * base / std::pow(w.k, nu - 1)),
                                                   max_distinct / (4.0 * base / std::pow(w.k, nu)))},
                {"pairs", static_cast<double>(pairs)}};
  return rep;
}

CheckReport check_kernel_projection_norms(std::span<const int> dims) {
  const KernelBasis basis = kernel_basis(dims);
  const int nu = static_cast<int>(dims.size());
  const double k = *std::max_element(dims.begin(), dims.end());
  const double omega = *std::min_element(dims.begin(), dims.end()) / k;
  const double lower = std::pow(omega, 2 * nu - 1) / (2 * k);
  const double upper = 1.0 / (std::pow(omega, 2 * nu - 1) * k);
  const auto rows = basis.vectors.front().size();

  double lo = INFINITY;
  double hi = 0.0;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(rows);
  for (Eigen::Index j = 0; j < rows; ++j) {
    e[j] = 1.0;
    const double norm = basis.project(e).cwiseAbs().maxCoeff();
    e[j] = 0.0;
    lo = std::min(lo, norm);
    hi = std::max(hi, norm);
  }
  CheckReport rep;
  rep.name = "kernel_projection";
  rep.max_ratio = std::max(hi / upper, lower / lo);
  rep.ok = lo >= lower * (1 - 1e-12) && hi <= upper * (1 + 1e-12);
  rep.values = {{"min_norm", lo}, {"max_norm", hi}, {"lower", lower}, {"upper", upper}};
  return rep;
}

std::span<const double> default_tail_deltas() {
  static constexpr std::array<double, 5> deltas{0.05, 0.1, 0.2, 0.5, 1.0};
  return deltas;
}

CheckReport check_gaussian_tail(const GaussianModel& model, const ConstraintSystem& cs,
                                const Witnesses& w, std::span<const double> deltas) {
  const double nu = cs.nu();
  const double gamma = 2.0 * std::pow(nu, 4) * w.R / (omega_power(w, 6 * nu - 3) * w.r * w.r);
  const Eigen::VectorXd var = model.covariance.diagonal();
  CheckReport rep;
  rep.name = "gaussian_tail";
  rep.ok = true;
  for (double delta : deltas) {
    double tail = 0.0;
    for (Eigen::Index j = 0; j < var.size(); ++j) tail += std::erfc(delta / std::sqrt(2.0 * var[j]));
    const double bound = nu * w.k * std::exp(-delta * delta * std::pow(w.k, nu - 1) / gamma);
    const double ratio = bound > 0.0 ? tail / bound : (tail > 0.0 ? INFINITY : 0.0);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    rep.ok = rep.ok && tail <= bound;
    rep.values.emplace_back("tail_at_" + std::to_string(delta).substr(0, 4), tail);
    rep.values.emplace_back("bound_at_" + std::to_string(delta).substr(0, 4), bound);
  }
  rep.values.emplace_back("gamma", gamma);
  return rep;
}

double third_degree_second_moment(const Eigen::MatrixXd& cell_cov, const Eigen::VectorXd& beta) {
  const Eigen::Index n = beta.size();
  double total = 0.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    if (beta[c] == 0.0) continue;
    for (Eigen::Index d = 0; d < n; ++d) {
      if (beta[d] == 0.0) continue;
      const double cc = cell_cov(c, d);
      total += beta[c] * beta[d] * (9.0 * cell_cov(c, c) * cell_cov(d, d) * cc + 6.0 * cc * cc * cc);
    }
  }
  return total;
}

Eigen::MatrixXd sample_gaussian(const GaussianModel& model, std::uint64_t seed, int draws) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(model.dim_l(), draws);
  for (int i = 0; i < draws; ++i) {
    for (int r = 0; r < model.dim_l(); ++r) g(r, i) = normal(rng);
  }
  return model.factor * g;
}

CheckReport check_third_degree_term(const GaussianModel& model, const IntegrandContext& ctx,
                                    std::uint64_t seed, int draws) {
  const Eigen::VectorXd& beta = ctx.cubic_coefficients();
  const Eigen::MatrixXd cell_cov = model.cell_map * model.covariance * model.cell_map.transpose();
  const double eu2 = third_degree_second_moment(cell_cov, beta);

  const Eigen::MatrixXd s = model.cell_map * sample_gaussian(model, seed, draws);
  std::complex<double> mean_phase = 0.0;
  double sum_u = 0.0, sum_u2 = 0.0, sum_u4 = 0.0, sum_cos2 = 0.0, sum_sin2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double u = beta.dot(s.col(i).array().cube().matrix());
    const double cu = std::cos(u), su = std::sin(u);
    mean_phase += std::complex<double>(cu, su);
    sum_cos2 += cu * cu;
    sum_sin2 += su * su;
    sum_u += u;
    sum_u2 += u * u;
    sum_u4 += u * u * u * u;
  }
  const double m = draws;
  mean_phase /= m;
  const double var_phase = std::max(0.0, sum_cos2 / m - std::norm(mean_phase.real()) +
                                             sum_sin2 / m - std::norm(mean_phase.imag()));
  const double se_phase = std::sqrt(var_phase / m);
  const double mean_u = sum_u / m;
  const double mean_u2 = sum_u2 / m;
  const double se_u = std::sqrt(std::max(0.0, mean_u2 - mean_u * mean_u) / m);
  const double se_u2 = std::sqrt(std::max(0.0, sum_u4 / m - mean_u2 * mean_u2) / m);
  const double deviation = std::abs(mean_phase - 1.0);

  const bool phase_ok = deviation <= 0.5 * eu2 + 3.0 * se_phase;
  const bool mean_ok = std::abs(mean_u) <= 5.0 * se_u;
  const bool second_ok = std::abs(mean_u2 - eu2) <= 5.0 * se_u2;

  CheckReport rep;
  rep.name = "third_degree";
  rep.ok = phase_ok && mean_ok && second_ok;
  rep.max_ratio = eu2 > 0.0 ? deviation / (0.5 * eu2 + 3.0 * se_phase) : (deviation > 0.0 ? INFINITY : 0.0);
  rep.values = {{"expected_u2", eu2},
                {"half_expected_u2", 0.5 * eu2},
                {"mc_abs_phase_minus_one", deviation},
                {"mc_phase_se", se_phase},
                {"mc_mean_u", mean_u},
                {"mc_mean_u_se", se_u},
                {"mc_mean_u2", mean_u2},
                {"mc_mean_u2_se", se_u2},
                {"draws", m}};
  return rep;
}

CheckReport check_sampling_covariance(const GaussianModel& model, std::uint64_t seed, int draws) {
  const Eigen::MatrixXd t = sample_gaussian(model, seed, draws);
  const Eigen::MatrixXd emp = t * t.transpose() / static_cast<double>(draws);
  const Eigen::MatrixXd& cov = model.covariance;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    for (Eigen::Index j = 0; j < cov.cols(); ++j) {
      const double se = std::sqrt((cov(i, i) * cov(j, j) + cov(i, j) * cov(i, j)) / draws);
      worst = std::max(worst, std::abs(emp(i, j) - cov(i, j)) / se);
    }
  }
  CheckReport rep;
  rep.name = "sampling_covariance";
  rep.max_ratio = worst / 5.0;
  rep.ok = worst <= 5.0;
  rep.values = {{"max_standard_errors", worst}, {"draws", static_cast<double>(draws)}};
  return rep;
}

DiagnosticsReport run_diagnostics(const CountEstimate& est, const ConstraintSystem& cs,
                                  std::uint64_t seed) {
  const Witnesses w{est.hypothesis.r, est.hypothesis.R, est.hypothesis.omega, est.hypothesis.k};
  const QuadraticForm qf = build_q(est.solution, cs);
  const GaussianModel model = covariance_model(qf, cs);
  const IntegrandContext ctx(cs, est.solution);

  DiagnosticsReport rep;
  rep.checks.push_back(eigenvalue_check(check_eigenvalue_bounds(cs, est.spectrum, w)));
  rep.checks.push_back(check_variance_bound(model, cs, w));
  rep.checks.push_back(check_correlation_bounds(model, cs, w, seed));
  rep.checks.push_back(check_kernel_projection_norms(cs.dims()));
  rep.checks.push_back(check_gaussian_tail(model, cs, w));
  rep.checks.push_back(check_third_degree_term(model, ctx, seed));
  rep.checks.push_back(check_sampling_covariance(model, seed + 1));
  rep.ok = std::all_of(rep.checks.begin(), rep.checks.end(), [](const CheckReport& c) { return c.ok; });
  return rep;
}

}  // namespace tpcount
