#include "raspen/forchheimer.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace raspen {

double q_flux(double g, double beta) {
  if (beta <= kDarcyThreshold) return g;
  const double mag = (-1.0 + std::sqrt(1.0 + 4.0 * beta * std::abs(g))) / (2.0 * beta);
  return g > 0.0 ? mag : (g < 0.0 ? -mag : 0.0);
}

double q_flux_derivative(double g, double beta) {
  if (beta <= kDarcyThreshold) return 1.0;
  return 1.0 / std::sqrt(1.0 + 4.0 * beta * std::abs(g));
}

Vector build_transmissibilities(double h, const Vector& lambda) {
  if (!(h > 0.0)) throw SolverError("cell width must be positive");
  const Index m = lambda.size();
  if (m < 1) throw SolverError("permeability field is empty");
  for (Index k = 0; k < m; ++k) {
    if (!(lambda[k] > 0.0)) {
      throw SolverError("permeability must be positive (cell " + std::to_string(k) + ")");
    }
  }
  Vector t(m + 1);
  const double half = 0.5 * h;
  t[0] = lambda[0] / half;
  t[m] = lambda[m - 1] / half;
  for (Index k = 1; k < m; ++k) t[k] = 1.0 / (half / lambda[k - 1] + half / lambda[k]);
  return t;
}

ForchheimerProblem1D::ForchheimerProblem1D(ForchheimerSetup setup) : setup_(std::move(setup)) {
  const Index m = setup_.lambda.size();
  if (m < 1) throw SolverError("forchheimer: no cells");
  require_size(setup_.source, m, "forchheimer source");
  if (!(setup_.length > 0.0)) throw SolverError("forchheimer: length must be positive");
  if (setup_.beta < 0.0) throw SolverError("forchheimer: beta must be nonnegative");
  h_ = setup_.length / static_cast<double>(m);
  trans_ = build_transmissibilities(h_, setup_.lambda);
}

ForchheimerProblem1D ForchheimerProblem1D::smooth(Index cells, double beta, double length) {
  ForchheimerSetup s;
  s.length = length;
  s.beta = beta;
  s.lambda.resize(cells);
  s.source.resize(cells);
  const double h = length / static_cast<double>(cells);
  for (Index k = 0; k < cells; ++k) {
    const double a = h * static_cast<double>(k);
    const double b = h * static_cast<double>(k + 1);
    const double integral = std::sin(b) - std::sin(a);
    s.lambda[k] = integral / h;
    s.source[k] = integral;
  }
  return ForchheimerProblem1D(std::move(s));
}

ForchheimerProblem1D ForchheimerProblem1D::random_contrast(Index cells, double beta,
                                                           const RandomContrastOptions& options,
                                                           double length) {
  ForchheimerSetup s;
  s.length = length;
  s.beta = beta;
  s.lambda.resize(cells);
  s.source.resize(cells);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> expo(options.log10_min, options.log10_max);
  const Index block = std::max<Index>(1, options.correlation_cells);
  double current = 1.0;
  for (Index k = 0; k < cells; ++k) {
    if (k % block == 0) current = std::pow(10.0, expo(rng));
    s.lambda[k] = current;
  }
  const double h = length / static_cast<double>(cells);
  const double w = options.source_frequency * std::numbers::pi;
  for (Index k = 0; k < cells; ++k) {
    const double a = h * static_cast<double>(k);
    const double b = h * static_cast<double>(k + 1);
    s.source[k] = options.source_amplitude * (std::cos(w * a) - std::cos(w * b)) / w;
  }
  return ForchheimerProblem1D(std::move(s));
}

ForchheimerProblem1D ForchheimerProblem1D::with_beta(double beta) const {
  ForchheimerSetup s = setup_;
  s.beta = beta;
  return ForchheimerProblem1D(std::move(s));
}

double ForchheimerProblem1D::row_residual(const Vector& u, Index k) const {
  const Index m = dof_count();
  const double beta = setup_.beta;
  const double left = k == 0 ? setup_.u_left : u[k - 1];
  const double right = k == m - 1 ? setup_.u_right : u[k + 1];
  return q_flux(trans_[k + 1] * (u[k] - right), beta) + q_flux(trans_[k] * (u[k] - left), beta) -
         setup_.source[k];
}

void ForchheimerProblem1D::row_jacobian(const Vector& u, Index row_out, Index k,
                                        std::vector<Triplet>& out) const {
  const Index m = dof_count();
  const double beta = setup_.beta;
  const double left = k == 0 ? setup_.u_left : u[k - 1];
  const double right = k == m - 1 ? setup_.u_right : u[k + 1];
  const double dr = trans_[k + 1] * q_flux_derivative(trans_[k + 1] * (u[k] - right), beta);
  const double dl = trans_[k] * q_flux_derivative(trans_[k] * (u[k] - left), beta);
  if (k > 0) out.emplace_back(row_out, k - 1, -dl);
  out.emplace_back(row_out, k, dl + dr);
  if (k < m - 1) out.emplace_back(row_out, k + 1, -dr);
}

Vector ForchheimerProblem1D::residual(const Vector& u) const {
  require_size(u, dof_count(), "forchheimer residual");
  Vector r(dof_count());
  for (Index k = 0; k < dof_count(); ++k) r[k] = row_residual(u, k);
  return r;
}

Vector ForchheimerProblem1D::residual_rows(const Vector& u, const IndexSet& rows) const {
  require_size(u, dof_count(), "forchheimer residual");
  Vector r(static_cast<Index>(rows.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) r[static_cast<Index>(a)] = row_residual(u, rows[a]);
  return r;
}

SparseMatrix ForchheimerProblem1D::jacobian(const Vector& u) const {
  require_size(u, dof_count(), "forchheimer jacobian");
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(3 * dof_count()));
  for (Index k = 0; k < dof_count(); ++k) row_jacobian(u, k, k, entries);
  SparseMatrix j(dof_count(), dof_count());
  j.setFromTriplets(entries.begin(), entries.end());
  return j;
}

SparseMatrix ForchheimerProblem1D::jacobian_rows(const Vector& u, const IndexSet& rows) const {
  require_size(u, dof_count(), "forchheimer jacobian");
  std::vector<Triplet> entries;
  entries.reserve(3 * rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    row_jacobian(u, static_cast<Index>(a), rows[a], entries);
  }
  SparseMatrix j(static_cast<Index>(rows.size()), dof_count());
  j.setFromTriplets(entries.begin(), entries.end());
  return j;
}

Vector ForchheimerProblem1D::coarse_lifting(const DecompositionLayout& layout) const {
  require_size(layout.boundary_lift(BoundarySide::x_min), dof_count(), "coarse lifting");
  return setup_.u_left * layout.boundary_lift(BoundarySide::x_min) +
         setup_.u_right * layout.boundary_lift(BoundarySide::x_max);
}

}  // namespace raspen
