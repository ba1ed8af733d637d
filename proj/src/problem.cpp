#include "raspen/problem.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace raspen {

Vector NonlinearProblem::residual_rows(const Vector& u, const IndexSet& rows) const {
  const Vector full = residual(u);
  Vector out(static_cast<Index>(rows.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) out[static_cast<Index>(a)] = full[rows[a]];
  return out;
}

SparseMatrix NonlinearProblem::jacobian_rows(const Vector& u, const IndexSet& rows) const {
  const SparseMatrix full = jacobian(u);
  std::vector<Triplet> entries;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (SparseMatrix::InnerIterator it(full, rows[a]); it; ++it) {
      entries.emplace_back(static_cast<Index>(a), it.col(), it.value());
    }
  }
  SparseMatrix out(static_cast<Index>(rows.size()), full.cols());
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

Vector NonlinearProblem::coarse_lifting(const DecompositionLayout& layout) const {
  return Vector::Zero(layout.n_cells());
}

namespace {

// Newton for F(u) = shift.
DirectNewtonResult shifted_newton(const NonlinearProblem& problem, const Vector& u0,
                                  const Vector& shift, const DirectNewtonOptions& options) {
  DirectNewtonResult result;
  result.solution = u0;
  Vector r = problem.residual(result.solution) - shift;
  result.residual_norm = r.norm();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  while (result.residual_norm > options.tol && result.iterations < options.max_iterations) {
    const Eigen::SparseMatrix<double> jac = problem.jacobian(result.solution);
    lu.compute(jac);
    if (lu.info() != Eigen::Success) {
      throw LocalSolveError("direct newton: singular Jacobian", -1, result.residual_norm);
    }
    const Vector step = lu.solve(-r);
    ++result.iterations;
    double alpha = 1.0;
    Vector trial = result.solution + step;
    Vector trial_r = problem.residual(trial) - shift;
    if (options.backtracking) {
      while (!(trial_r.norm() < result.residual_norm) && alpha > 1e-6) {
        alpha *= 0.5;
        trial = result.solution + alpha * step;
        trial_r = problem.residual(trial) - shift;
      }
    }
    result.solution = std::move(trial);
    r = std::move(trial_r);
    result.residual_norm = r.norm();
    if (!std::isfinite(result.residual_norm)) break;
  }
  result.converged = result.residual_norm <= options.tol;
  return result;
}

// Round-off can stall just above 1e-12 on large meshes; a stagnated iterate is
// still many orders below the solver tolerances.
constexpr double kReferenceAcceptable = 1e-10;

}  // namespace

DirectNewtonResult direct_newton(const NonlinearProblem& problem, const Vector& u0,
                                 const DirectNewtonOptions& options) {
  require_size(u0, problem.dof_count(), "direct newton initial guess");
  return shifted_newton(problem, u0, Vector::Zero(u0.size()), options);
}

Vector reference_solution(const NonlinearProblem& problem, const Vector& u0) {
  DirectNewtonOptions opts;
  opts.tol = 1e-12;
  opts.max_iterations = 200;
  opts.backtracking = true;
  auto direct = direct_newton(problem, u0, opts);
  if (direct.residual_norm <= kReferenceAcceptable) return direct.solution;

  // Newton homotopy F(u) = (1 - t) F(u0), t: 0 -> 1.
  const Vector r0 = problem.residual(u0);
  Vector u = u0;
  double t = 0.0;
  double dt = 0.1;
  DirectNewtonOptions stage = opts;
  stage.max_iterations = 50;
  while (t < 1.0) {
    const double next = std::min(1.0, t + dt);
    auto step = shifted_newton(problem, u, (1.0 - next) * r0, stage);
    if (step.residual_norm <= kReferenceAcceptable) {
      u = std::move(step.solution);
      t = next;
      dt = std::min(2.0 * dt, 0.5);
    } else {
      dt *= 0.5;
      if (dt < 1e-4) {
        throw LocalSolveError("reference solution did not converge", -1, step.residual_norm);
      }
    }
  }
  return u;
}

double relative_l1_error(const Vector& u, const Vector& reference) {
  require_size(u, reference.size(), "relative l1 error");
  const double denom = reference.lpNorm<1>();
  const double num = (u - reference).lpNorm<1>();
  return denom > 0.0 ? num / denom : num;
}

}  // namespace raspen
