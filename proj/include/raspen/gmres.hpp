#pragma once

#include <functional>

#include "raspen/types.hpp"

namespace raspen {

using LinearOperator = std::function<Vector(const Vector&)>;

struct GmresReport {
  /// Operator applications performed.
  int iterations = 0;
  /// ||rhs - A x|| / ||rhs|| as tracked by the Givens recurrence.
  double relative_residual = 0.0;
  bool converged = false;
  /// Relative residual after each iteration, starting with 1 for x = 0.
  std::vector<double> history;
};

struct GmresResult {
  Vector solution;
  GmresReport report;
};

/// Unrestarted GMRES from a zero initial guess, modified Gram-Schmidt
/// Arnoldi with Givens rotations. An Arnoldi norm below 1e-14 ||rhs|| is a
/// lucky breakdown and counts as convergence. Hitting max_iter is not an
/// error: the best iterate is returned with converged = false.
GmresResult gmres(const LinearOperator& op, const Vector& rhs, double tol = 1e-8,
                  int max_iter = 1000);

}  // namespace raspen
