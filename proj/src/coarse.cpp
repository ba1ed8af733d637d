#include "raspen/coarse.hpp"

#include <cmath>

namespace raspen {
namespace {

void check_layout(const NonlinearProblem& problem, const DecompositionLayout& layout) {
  if (layout.n_cells() != problem.dof_count()) {
    throw DimensionError("layout and problem sizes differ");
  }
}

std::shared_ptr<const CoarseLu> factorize(const DenseMatrix& j, double residual) {
  auto lu = std::make_shared<CoarseLu>(j);
  const double rc = lu->rcond();
  if (!(rc > 1e-14)) throw LocalSolveError("singular coarse Jacobian", -1, residual);
  return lu;
}

struct CoarseNewton {
  Vector iterate;
  DenseMatrix first_jacobian;
  DenseMatrix final_jacobian;
  std::shared_ptr<const CoarseLu> final_lu;
  int iterations = 0;
  double residual = 0.0;
};

// Newton for F_0(z) = rhs from z = start.
CoarseNewton coarse_newton(const NonlinearProblem& problem, const DecompositionLayout& layout,
                           const Vector& start, const Vector& rhs,
                           const SolverSettings& settings) {
  CoarseNewton out;
  out.iterate = start;
  for (;;) {
    const Vector g = coarse_residual(problem, layout, out.iterate) - rhs;
    out.residual = g.norm();
    if (!std::isfinite(out.residual)) {
      throw LocalSolveError("non-finite coarse residual", -1, out.residual);
    }
    out.final_jacobian = coarse_jacobian(problem, layout, out.iterate);
    if (out.iterations == 0) out.first_jacobian = out.final_jacobian;
    out.final_lu = factorize(out.final_jacobian, out.residual);
    if (out.residual <= settings.inner_tol) break;
    if (out.iterations >= settings.max_inner_iterations) {
      throw LocalSolveError("coarse Newton did not converge in " +
                                std::to_string(settings.max_inner_iterations) + " iterations",
                            -1, out.residual);
    }
    out.iterate -= out.final_lu->solve(g);
    ++out.iterations;
  }
  return out;
}

}  // namespace

Vector coarse_residual(const NonlinearProblem& problem, const DecompositionLayout& layout,
                       const Vector& u0) {
  check_layout(problem, layout);
  require_size(u0, layout.n_coarse(), "coarse residual");
  return layout.coarse_restrict_test(
      problem.residual(layout.coarse_prolong(u0) + problem.coarse_lifting(layout)));
}

DenseMatrix coarse_jacobian(const NonlinearProblem& problem, const DecompositionLayout& layout,
                            const Vector& u0) {
  check_layout(problem, layout);
  require_size(u0, layout.n_coarse(), "coarse jacobian");
  const SparseMatrix j =
      problem.jacobian(layout.coarse_prolong(u0) + problem.coarse_lifting(layout));
  const SparseMatrix jp = j * layout.coarse_prolong_matrix();
  const SparseMatrix galerkin = layout.coarse_test_matrix() * jp;
  return DenseMatrix(galerkin);
}

CoarseSolveResult fas_correction(const NonlinearProblem& problem,
                                 const DecompositionLayout& layout, const Vector& u,
                                 const SolverSettings& settings) {
  check_layout(problem, layout);
  require_size(u, problem.dof_count(), "fas correction");
  const Vector base = layout.coarse_restrict_mean(u);
  const Vector rhs = coarse_residual(problem, layout, base) -
                     layout.coarse_restrict_test(problem.residual(u));
  auto newton = coarse_newton(problem, layout, base, rhs, settings);
  CoarseSolveResult result;
  result.correction = newton.iterate - base;
  result.j0 = std::move(newton.first_jacobian);
  result.j0_hat = std::move(newton.final_jacobian);
  result.j0_hat_lu = std::move(newton.final_lu);
  result.inner_iterations = newton.iterations;
  result.final_residual = newton.residual;
  result.base_fingerprint = fingerprint(u);
  return result;
}

Vector apply_fas_correction_jacobian(const CoarseSolveResult& result,
                                     const DecompositionLayout& layout, const Vector& v,
                                     const Vector& jv) {
  const Vector r0v = layout.coarse_restrict_mean(v);
  const Vector rhs = result.j0 * r0v - layout.coarse_restrict_test(jv);
  return -r0v + result.j0_hat_lu->solve(rhs);
}

Vector fas_correction_jacobian_action(const CoarseSolveResult& result,
                                      const NonlinearProblem& problem,
                                      const DecompositionLayout& layout, const Vector& u,
                                      const Vector& v) {
  require_size(v, problem.dof_count(), "fas jacobian action");
  if (fingerprint(u) != result.base_fingerprint) {
    throw StaleCacheError("coarse correction was computed at a different point");
  }
  return apply_fas_correction_jacobian(result, layout, v, problem.jacobian(u) * v);
}

Vector aspin_coarse_setup(const NonlinearProblem& problem, const DecompositionLayout& layout,
                          const SolverSettings& settings) {
  check_layout(problem, layout);
  const Vector zero = Vector::Zero(layout.n_coarse());
  return coarse_newton(problem, layout, zero, zero, settings).iterate;
}

CoarseSolveResult aspin_coarse_correction(const NonlinearProblem& problem,
                                          const DecompositionLayout& layout, const Vector& u,
                                          const Vector& u0_star, const SolverSettings& settings) {
  check_layout(problem, layout);
  require_size(u, problem.dof_count(), "aspin coarse correction");
  require_size(u0_star, layout.n_coarse(), "aspin coarse solution");
  const Vector rhs = -layout.coarse_restrict_test(problem.residual(u));
  auto newton = coarse_newton(problem, layout, u0_star, rhs, settings);
  CoarseSolveResult result;
  result.correction = newton.iterate - u0_star;
  result.j0_hat = std::move(newton.final_jacobian);
  result.j0_hat_lu = std::move(newton.final_lu);
  result.inner_iterations = newton.iterations;
  result.final_residual = newton.residual;
  result.base_fingerprint = fingerprint(u);
  return result;
}

Vector apply_aspin_coarse_jacobian(const CoarseSolveResult& result,
                                   const DecompositionLayout& layout, const Vector& jv) {
  return -result.j0_hat_lu->solve(layout.coarse_restrict_test(jv));
}

Vector aspin_coarse_jacobian_action(const CoarseSolveResult& result,
                                    const NonlinearProblem& problem,
                                    const DecompositionLayout& layout, const Vector& u,
                                    const Vector& v) {
  require_size(v, problem.dof_count(), "aspin coarse jacobian action");
  if (fingerprint(u) != result.base_fingerprint) {
    throw StaleCacheError("coarse correction was computed at a different point");
  }
  return apply_aspin_coarse_jacobian(result, layout, problem.jacobian(u) * v);
}

}  // namespace raspen
