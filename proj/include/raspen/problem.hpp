#pragma once

#include <optional>
#include <string>

#include "raspen/decomposition.hpp"

namespace raspen {

/// Discrete nonlinear system F(u) = 0 with boundary data folded into F.
///
/// Implementations are immutable; every method is pure and may be called
/// concurrently.
class NonlinearProblem {
 public:
  virtual ~NonlinearProblem() = default;

  virtual Index dof_count() const = 0;
  virtual std::string name() const = 0;

  virtual Vector residual(const Vector& u) const = 0;
  virtual SparseMatrix jacobian(const Vector& u) const = 0;

  /// Rows `rows` of F(u). The default evaluates the full residual.
  virtual Vector residual_rows(const Vector& u, const IndexSet& rows) const;

  /// Rows `rows` of J(u) as a |rows| x dof_count matrix. The default assembles
  /// the full Jacobian.
  virtual SparseMatrix jacobian_rows(const Vector& u, const IndexSet& rows) const;

  /// Fine-grid contribution of the Dirichlet data to an interpolated coarse
  /// state, built from layout.boundary_lift(). Zero by default.
  virtual Vector coarse_lifting(const DecompositionLayout& layout) const;
};

struct DirectNewtonOptions {
  double tol = 1e-12;
  int max_iterations = 100;
  /// Halve the step until the residual norm decreases. Off for the plain
  /// Newton baseline, on for reference-solution generation.
  bool backtracking = false;
};

struct DirectNewtonResult {
  Vector solution;
  int iterations = 0;
  bool converged = false;
  double residual_norm = 0.0;
};

/// Newton's method on the full problem with a sparse direct solver.
/// Stops once ||F(u)||_2 <= tol.
DirectNewtonResult direct_newton(const NonlinearProblem& problem, const Vector& u0,
                                 const DirectNewtonOptions& options = {});

/// Tight-tolerance reference solution used as the error baseline.
Vector reference_solution(const NonlinearProblem& problem, const Vector& u0);

/// ||a - b||_1 / ||b||_1.
double relative_l1_error(const Vector& u, const Vector& reference);

}  // namespace raspen
