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

#include "tpcount/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace tpcount {
namespace {

using cd = std::complex<double>;

long long wrap(long long v, long long n) {
  const long long r = v % n;
  return r < 0 ? r + n : r;
}

std::vector<long long> integral_margins(const ConstraintSystem& cs) {
  std::vector<long long> b(cs.rows());
  for (int r = 0; r < cs.rows(); ++r) {
    const double v = cs.b()[r];
    if (v != std::round(v)) {
      throw Error(ErrorKind::NonIntegerMargins, "grid quadrature needs integral margins");
    }
    b[r] = static_cast<long long>(v);
  }
  return b;
}

cd factor(Mode mode, double zeta, cd phase) {
  if (mode == Mode::Binary) return 1.0 - zeta + zeta * phase;
  const cd denom = 1.0 + zeta - zeta * phase;
  if (std::abs(denom) < 1e-14) throw Error(ErrorKind::PoleEncountered, "integrand pole");
  return 1.0 / denom;
}

// Direction whose fold leaves the fewest outer coordinates.
int fold_direction(const ConstraintSystem& cs) {
  int best = 0;
  int best_count = cs.dims()[0];
  for (int j = 1; j < cs.nu(); ++j) {
    if (cs.dims()[j] - 1 > best_count) {
      best = j;
      best_count = cs.dims()[j] - 1;
    }
  }
  return best;
}

std::uint64_t folded_work(const ConstraintSystem& cs, int grid) {
  const int f = fold_direction(cs);
  const int folded = f == 0 ? cs.dims()[0] : cs.dims()[f] - 1;
  const int outer = cs.dim_l() - folded;
  double work = static_cast<double>(cs.cells()) * grid;
  for (int i = 0; i < outer; ++i) work *= grid;
  return work > 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(work);
}

}  // namespace

IntegrandContext::IntegrandContext(ConstraintSystem cs, MaxEntropySolution solution)
    : cs_(std::move(cs)), solution_(std::move(solution)) {
  const auto& z = solution_.z;
  if (static_cast<std::size_t>(z.size()) != cs_.cells()) {
    throw Error(ErrorKind::LengthMismatch, "solution does not match the constraint system");
  }
  const bool integer = solution_.mode == Mode::Integer;
  alpha_ = integer ? Eigen::VectorXd(z + z.cwiseProduct(z)) : Eigen::VectorXd(z - z.cwiseProduct(z));
  cubic_.resize(z.size());
  for (Eigen::Index c = 0; c < z.size(); ++c) {
    cubic_[c] = alpha_[c] * (integer ? 2.0 * z[c] + 1.0 : 2.0 * z[c] - 1.0) / 6.0;
  }
}

Eigen::VectorXd IntegrandContext::cell_sums(const Eigen::VectorXd& t) const {
  const Eigen::VectorXd full = cs_.embed_from_l(t);
  Eigen::VectorXd s(static_cast<Eigen::Index>(cs_.cells()));
  for (std::size_t c = 0; c < cs_.cells(); ++c) {
    double acc = 0.0;
    for (int r : cs_.cell_rows(c)) acc += full[r];
    s[static_cast<Eigen::Index>(c)] = acc;
  }
  return s;
}

cd IntegrandContext::F(const Eigen::VectorXd& t) const {
  const Eigen::VectorXd s = cell_sums(t);
  const double tb = cs_.b().dot(cs_.embed_from_l(t));
  cd value = std::polar(1.0, -tb);
  for (Eigen::Index c = 0; c < s.size(); ++c) {
    value *= factor(mode(), solution_.z[c], std::polar(1.0, s[c]));
  }
  return value;
}

cd IntegrandContext::log_F(const Eigen::VectorXd& t) const {
  const Eigen::VectorXd s = cell_sums(t);
  cd value(0.0, -cs_.b().dot(cs_.embed_from_l(t)));
  for (Eigen::Index c = 0; c < s.size(); ++c) {
    value += std::log(factor(mode(), solution_.z[c], std::polar(1.0, s[c])));
  }
  return value;
}

double IntegrandContext::q(const Eigen::VectorXd& t) const {
  const Eigen::VectorXd s = cell_sums(t);
  return 0.5 * alpha_.dot(s.cwiseProduct(s));
}

double IntegrandContext::expansion_radius() const {
  const double nu = cs_.nu();
  if (mode() == Mode::Binary) return 1.0 / (2.0 * nu);
  return 1.0 / (2.0 * nu * std::sqrt(std::max(1.0, alpha_.maxCoeff())));
}

void IntegrandContext::require_in_radius(const Eigen::VectorXd& t) const {
  const double norm = t.size() ? t.cwiseAbs().maxCoeff() : 0.0;
  if (norm > expansion_radius()) {
    std::ostringstream os;
    os << "||t||_inf = " << norm << " exceeds the expansion radius " << expansion_radius();
    throw Error(ErrorKind::OutOfExpansionRadius, os.str());
  }
}

double IntegrandContext::cubic_f(const Eigen::VectorXd& t) const {
  require_in_radius(t);
  const Eigen::VectorXd s = cell_sums(t);
  return cubic_.dot(s.cwiseProduct(s).cwiseProduct(s));
}

double IntegrandContext::quartic_h_bound(const Eigen::VectorXd& t) const {
  require_in_radius(t);
  const Eigen::VectorXd s = cell_sums(t);
  double bound = 0.0;
  for (Eigen::Index c = 0; c < s.size(); ++c) {
    const double s4 = std::pow(s[c], 4);
    const double z4 = std::pow(solution_.z[c], 4);
    bound += mode() == Mode::Integer ? (1.0 + z4) * s4 : s4;
  }
  return 2.0 * bound;
}

cd grid_mean_F(const IntegrandContext& ctx, int grid) {
  const auto& cs = ctx.constraints();
  const auto& z = ctx.solution().z;
  const long long n_grid = grid;
  const auto b = integral_margins(cs);
  const auto cells = cs.cells();
  const long long half = n_grid / 2;

  std::vector<cd> unit(grid);
  for (int p = 0; p < grid; ++p) unit[p] = std::polar(1.0, 2.0 * std::numbers::pi * p / grid);
  // table[c * grid + p] is the factor of cell c at phase index p.
  std::vector<cd> table(cells * grid);
  for (std::size_t c = 0; c < cells; ++c) {
    for (int p = 0; p < grid; ++p) {
      table[c * grid + p] = factor(ctx.mode(), z[static_cast<Eigen::Index>(c)], unit[p]);
    }
  }

  const int fold = fold_direction(cs);
  std::vector<int> outer_rows;
  for (int r : cs.retained_rows()) {
    if (cs.direction_of_row(r) != fold) outer_rows.push_back(r);
  }
  std::vector<std::vector<std::size_t>> groups(cs.dims()[fold]);
  for (std::size_t c = 0; c < cells; ++c) {
    groups[cs.cell_rows(c)[fold] - cs.offset(fold)].push_back(c);
  }

  std::vector<long long> shift(cs.rows(), 0);  // x - N/2 on outer rows, 0 elsewhere
  std::vector<long long> idx(outer_rows.size(), 0);
  for (int r : outer_rows) shift[r] = -half;
  std::vector<cd> acc(grid);
  cd total = 0.0;
  std::uint64_t outer_points = 0;

  while (true) {
    long long tb = 0;
    for (int r : outer_rows) tb += b[r] * shift[r];
    cd prod = unit[wrap(-tb, n_grid)];

    for (int m = 0; m < cs.dims()[fold] && prod != cd(0.0); ++m) {
      const int fold_row = cs.row(fold, m);
      if (!cs.is_retained(fold_row)) {
        cd g = 1.0;
        for (std::size_t c : groups[m]) {
          long long phase = 0;
          for (int r : cs.cell_rows(c)) phase += shift[r];
          g *= table[c * grid + wrap(phase, n_grid)];
        }
        prod *= g;
        continue;
      }
      for (long long x = 0; x < n_grid; ++x) acc[x] = unit[wrap(-b[fold_row] * (x - half), n_grid)];
      for (std::size_t c : groups[m]) {
        long long phase = 0;
        for (int r : cs.cell_rows(c)) {
          if (r != fold_row) phase += shift[r];
        }
        const long long offset = wrap(phase - half, n_grid);
        const cd* row = &table[c * grid];
        for (long long x = 0; x < n_grid; ++x) {
          long long p = x + offset;
          if (p >= n_grid) p -= n_grid;
          acc[x] *= row[p];
        }
      }
      cd g = 0.0;
      for (long long x = 0; x < n_grid; ++x) g += acc[x];
      prod *= g / static_cast<double>(grid);
    }
    total += prod;
    ++outer_points;

    std::size_t d = 0;
    for (; d < outer_rows.size(); ++d) {
      if (++idx[d] < n_grid) {
        shift[outer_rows[d]] = idx[d] - half;
        break;
      }
      idx[d] = 0;
      shift[outer_rows[d]] = -half;
    }
    if (d == outer_rows.size()) break;
  }
  return total / static_cast<double>(outer_points);
}

cd grid_mean_F_direct(const IntegrandContext& ctx, int grid) {
  const int dim = ctx.dim_l();
  std::vector<int> idx(dim, 0);
  Eigen::VectorXd t(dim);
  const double step = 2.0 * std::numbers::pi / grid;
  cd total = 0.0;
  std::uint64_t points = 0;
  while (true) {
    for (int i = 0; i < dim; ++i) t[i] = (idx[i] - grid / 2) * step;
    total += ctx.F(t);
    ++points;
    int d = 0;
    for (; d < dim; ++d) {
      if (++idx[d] < grid) break;
      idx[d] = 0;
    }
    if (d == dim) break;
  }
  return total / static_cast<double>(points);
}

cd quadrature_count(const IntegrandContext& ctx, int grid) {
  return std::exp(ctx.solution().gz) * grid_mean_F(ctx, grid);
}

QuadratureReport verify_integral_representation(const MarginSpec& spec, Mode mode, int grid,
                                                const QuadratureOptions& options,
                                                const CountOptions& count_options,
                                                const SolverOptions& solver_options) {
  ValidationOptions v;
  v.mode = mode;
  v.require_positive = false;
  v.require_integer = true;
  require_valid(spec, v);
  if (grid < 4 || grid % 2 != 0) {
    throw Error(ErrorKind::InvalidConfig, "grid size must be even and at least 4");
  }

  ConstraintSystem cs(spec);
  if (cs.dim_l() > options.max_dim_l) {
    std::ostringstream os;
    os << "dim L = " << cs.dim_l() << " exceeds the quadrature limit " << options.max_dim_l;
    throw Error(ErrorKind::BudgetExceeded, os.str());
  }
  if (folded_work(cs, grid) > options.max_evaluations) {
    throw Error(ErrorKind::BudgetExceeded, "quadrature grid too large for the evaluation budget");
  }

  MaxEntropySolution solution = solve_max_entropy(cs, mode, solver_options);
  const IntegrandContext ctx(std::move(cs), std::move(solution));

  QuadratureReport report;
  report.mode = mode;
  report.grid = grid;
  const cd fine = quadrature_count(ctx, grid);
  const cd coarse = quadrature_count(ctx, grid / 2);
  report.value = fine.real();
  report.imag = fine.imag();
  report.coarse_value = coarse.real();
  report.refinement_delta = std::abs(fine - coarse) / std::max(std::abs(fine), 1e-300);
  if (report.refinement_delta > options.refine_tol) {
    std::ostringstream os;
    os << "grid " << grid << " and grid " << grid / 2 << " disagree by "
       << report.refinement_delta << " (relative)";
    throw Error(ErrorKind::QuadratureNotConverged, os.str());
  }

  report.exact_count = count_exact(spec, mode, count_options).count;
  const double exact = report.exact_count.convert_to<double>();
  report.rel_error = exact != 0.0 ? std::abs(report.value - exact) / exact : std::abs(report.value);
  return report;
}

}  // namespace tpcount
