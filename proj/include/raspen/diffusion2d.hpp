#pragma once

#include <functional>

#include "raspen/problem.hpp"

namespace raspen {

/// -div((1 + u^2) grad u) = f on the unit square, u = 1 on x = 1 and zero
/// normal flux elsewhere.
///
/// Cell-centered five-point flux-form finite differences on an nx x ny grid;
/// cell (ix, iy) has index iy * nx + ix. Each face coefficient is the mean of
/// (1 + u^2) over its two sides, where the Dirichlet side uses the boundary
/// value. Rows are scaled by the cell area.
class DiffusionProblem2D final : public NonlinearProblem {
 public:
  using Source = std::function<double(double, double)>;

  DiffusionProblem2D(Index nx, Index ny, Source source);

  /// f(x, y) = x sin(y).
  static DiffusionProblem2D standard(Index nx, Index ny);

  Index dof_count() const override { return nx_ * ny_; }
  std::string name() const override { return "diffusion2d"; }

  Vector residual(const Vector& u) const override;
  SparseMatrix jacobian(const Vector& u) const override;
  Vector residual_rows(const Vector& u, const IndexSet& rows) const override;
  SparseMatrix jacobian_rows(const Vector& u, const IndexSet& rows) const override;
  Vector coarse_lifting(const DecompositionLayout& layout) const override;

  Index nx() const noexcept { return nx_; }
  Index ny() const noexcept { return ny_; }
  static constexpr double kDirichletValue = 1.0;

 private:
  double row_residual(const Vector& u, Index cell) const;
  void row_jacobian(const Vector& u, Index row_out, Index cell, std::vector<Triplet>& out) const;

  Index nx_;
  Index ny_;
  double hx_;
  double hy_;
  Vector source_;  // cell-integrated
};

}  // namespace raspen
