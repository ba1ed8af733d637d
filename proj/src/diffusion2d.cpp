#include "raspen/diffusion2d.hpp"

#include <cmath>

namespace raspen {
namespace {

double kappa(double u) { return 1.0 + u * u; }

}  // namespace

DiffusionProblem2D::DiffusionProblem2D(Index nx, Index ny, Source source)
    : nx_(nx), ny_(ny) {
  if (nx < 1 || ny < 1) throw SolverError("diffusion2d: grid must be nonempty");
  hx_ = 1.0 / static_cast<double>(nx);
  hy_ = 1.0 / static_cast<double>(ny);
  source_.resize(nx * ny);
  for (Index iy = 0; iy < ny; ++iy) {
    for (Index ix = 0; ix < nx; ++ix) {
      const double x = (static_cast<double>(ix) + 0.5) * hx_;
      const double y = (static_cast<double>(iy) + 0.5) * hy_;
      source_[iy * nx + ix] = hx_ * hy_ * source(x, y);
    }
  }
}

DiffusionProblem2D DiffusionProblem2D::standard(Index nx, Index ny) {
  return DiffusionProblem2D(nx, ny, [](double x, double y) { return x * std::sin(y); });
}

double DiffusionProblem2D::row_residual(const Vector& u, Index cell) const {
  const Index ix = cell % nx_;
  const Index iy = cell / nx_;
  const double uk = u[cell];
  const double wx = hy_ / hx_;
  const double wy = hx_ / hy_;
  double r = -source_[cell];
  auto face = [&](double un, double weight) {
    r += weight * 0.5 * (kappa(uk) + kappa(un)) * (uk - un);
  };
  if (ix > 0) face(u[cell - 1], wx);
  if (ix < nx_ - 1) {
    face(u[cell + 1], wx);
  } else {
    face(kDirichletValue, 2.0 * wx);
  }
  if (iy > 0) face(u[cell - nx_], wy);
  if (iy < ny_ - 1) face(u[cell + nx_], wy);
  return r;
}

void DiffusionProblem2D::row_jacobian(const Vector& u, Index row_out, Index cell,
                                      std::vector<Triplet>& out) const {
  const Index ix = cell % nx_;
  const Index iy = cell / nx_;
  const double uk = u[cell];
  const double wx = hy_ / hx_;
  const double wy = hx_ / hy_;
  double diag = 0.0;
  // d/du_k and d/du_n of weight * (k(uk) + k(un)) / 2 * (uk - un).
  auto face = [&](double un, double weight, Index neighbor) {
    const double mean = 0.5 * (kappa(uk) + kappa(un));
    diag += weight * (mean + uk * (uk - un));
    if (neighbor >= 0) out.emplace_back(row_out, neighbor, weight * (-mean + un * (uk - un)));
  };
  if (ix > 0) face(u[cell - 1], wx, cell - 1);
  if (ix < nx_ - 1) {
    face(u[cell + 1], wx, cell + 1);
  } else {
    face(kDirichletValue, 2.0 * wx, -1);
  }
  if (iy > 0) face(u[cell - nx_], wy, cell - nx_);
  if (iy < ny_ - 1) face(u[cell + nx_], wy, cell + nx_);
  out.emplace_back(row_out, cell, diag);
}

Vector DiffusionProblem2D::residual(const Vector& u) const {
  require_size(u, dof_count(), "diffusion2d residual");
  Vector r(dof_count());
  for (Index c = 0; c < dof_count(); ++c) r[c] = row_residual(u, c);
  return r;
}

Vector DiffusionProblem2D::residual_rows(const Vector& u, const IndexSet& rows) const {
  require_size(u, dof_count(), "diffusion2d residual");
  Vector r(static_cast<Index>(rows.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) r[static_cast<Index>(a)] = row_residual(u, rows[a]);
  return r;
}

SparseMatrix DiffusionProblem2D::jacobian(const Vector& u) const {
  require_size(u, dof_count(), "diffusion2d jacobian");
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(5 * dof_count()));
  for (Index c = 0; c < dof_count(); ++c) row_jacobian(u, c, c, entries);
  SparseMatrix j(dof_count(), dof_count());
  j.setFromTriplets(entries.begin(), entries.end());
  return j;
}

SparseMatrix DiffusionProblem2D::jacobian_rows(const Vector& u, const IndexSet& rows) const {
  require_size(u, dof_count(), "diffusion2d jacobian");
  std::vector<Triplet> entries;
  entries.reserve(5 * rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    row_jacobian(u, static_cast<Index>(a), rows[a], entries);
  }
  SparseMatrix j(static_cast<Index>(rows.size()), dof_count());
  j.setFromTriplets(entries.begin(), entries.end());
  return j;
}

Vector DiffusionProblem2D::coarse_lifting(const DecompositionLayout& layout) const {
  require_size(layout.boundary_lift(BoundarySide::x_max), dof_count(), "coarse lifting");
  return kDirichletValue * layout.boundary_lift(BoundarySide::x_max);
}

}  // namespace raspen
