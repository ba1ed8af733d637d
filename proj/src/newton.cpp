#include "raspen/newton.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <limits>

#include "raspen/gmres.hpp"

namespace raspen {
namespace {

double error_of(const Vector& u, const std::optional<Vector>& reference) {
  return reference ? relative_l1_error(u, *reference) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

void IterationLedger::push(const IterationRecord& record) {
  rows_.push_back(record);
  cumulative_.push_back(total() + record.ls_in + record.ls_G);
}

RunResult outer_newton(PreconditionedSystem& system, const Vector& u0,
                       const SolverSettings& settings, const std::optional<Vector>& reference) {
  settings.validate();
  require_size(u0, system.dof_count(), "outer newton initial guess");
  RunResult run;
  run.solution = u0;
  run.initial_error = error_of(u0, reference);

  Vector r;
  try {
    r = system.residual(run.solution);
  } catch (const LocalSolveError& e) {
    run.failure = std::string("initial evaluation: ") + e.what();
    run.aborted = true;
    return run;
  }
  EvaluationStats stats = system.last_stats();
  double rnorm = r.norm();
  run.initial_residual = rnorm;

  while (rnorm > settings.outer_tol) {
    if (!std::isfinite(rnorm)) {
      run.failure = "preconditioned residual is not finite";
      break;
    }
    if (run.outer_iterations >= settings.max_outer_iterations) {
      run.failure = "outer Newton reached " + std::to_string(settings.max_outer_iterations) +
                    " iterations";
      break;
    }
    const Vector& u = run.solution;
    auto lin = gmres([&](const Vector& v) { return system.jacobian_action(u, v); }, -r,
                     settings.gmres_tol, settings.max_gmres_iterations);

    IterationRecord rec;
    rec.ls_in = stats.ls_in_max;
    rec.ls_min = stats.ls_in_min;
    rec.ls_G = lin.report.iterations;
    rec.gmres_converged = lin.report.converged;

    run.solution += lin.solution;
    ++run.outer_iterations;
    try {
      r = system.residual(run.solution);
    } catch (const LocalSolveError& e) {
      rec.residual = std::numeric_limits<double>::quiet_NaN();
      rec.error = error_of(run.solution, reference);
      run.ledger.push(rec);
      run.failure = "outer iteration " + std::to_string(run.outer_iterations) + ": " + e.what();
      run.aborted = true;
      return run;
    }
    stats = system.last_stats();
    rnorm = r.norm();
    rec.residual = rnorm;
    rec.error = error_of(run.solution, reference);
    run.ledger.push(rec);
  }
  run.converged = rnorm <= settings.outer_tol;
  return run;
}

RunResult fixed_point_solve(PreconditionedSystem& system, const Vector& u0,
                            const SolverSettings& settings, const std::optional<Vector>& reference,
                            std::optional<int> max_steps) {
  settings.validate();
  require_size(u0, system.dof_count(), "fixed point initial guess");
  const int budget = max_steps.value_or(settings.max_fixed_point_steps);
  RunResult run;
  run.solution = u0;
  run.initial_error = error_of(u0, reference);
  double measure = reference ? run.initial_error : std::numeric_limits<double>::infinity();

  while (!(measure <= settings.outer_tol)) {
    if (run.outer_iterations >= budget) {
      run.failure = "fixed-point budget of " + std::to_string(budget) + " steps exhausted";
      break;
    }
    Vector step;
    try {
      step = system.residual(run.solution);
    } catch (const LocalSolveError& e) {
      run.failure = "step " + std::to_string(run.outer_iterations + 1) + ": " + e.what();
      run.aborted = true;
      break;
    }
    const auto& stats = system.last_stats();
    run.solution += step;
    ++run.outer_iterations;

    IterationRecord rec;
    rec.ls_in = stats.ls_in_max;
    rec.ls_min = stats.ls_in_min;
    rec.residual = step.norm();
    rec.error = error_of(run.solution, reference);
    run.ledger.push(rec);
    if (run.outer_iterations == 1) run.initial_residual = rec.residual;

    measure = reference ? rec.error : rec.residual;
    if (!std::isfinite(measure) || measure > settings.divergence_threshold) {
      run.failure = "fixed-point iteration diverged";
      break;
    }
  }
  run.converged = !run.aborted && measure <= settings.outer_tol;
  return run;
}

RunResult global_newton(const NonlinearProblem& problem, const Vector& u0,
                        const SolverSettings& settings, const std::optional<Vector>& reference) {
  settings.validate();
  require_size(u0, problem.dof_count(), "global newton initial guess");
  RunResult run;
  run.solution = u0;
  run.initial_error = error_of(u0, reference);
  Vector r = problem.residual(run.solution);
  double rnorm = r.norm();
  run.initial_residual = rnorm;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  while (rnorm > settings.outer_tol) {
    if (!std::isfinite(rnorm)) {
      run.failure = "residual is not finite";
      break;
    }
    if (run.outer_iterations >= settings.max_outer_iterations) {
      run.failure = "Newton reached " + std::to_string(settings.max_outer_iterations) +
                    " iterations";
      break;
    }
    const Eigen::SparseMatrix<double> jac = problem.jacobian(run.solution);
    lu.compute(jac);
    if (lu.info() != Eigen::Success) {
      run.failure = "singular Jacobian";
      break;
    }
    run.solution -= lu.solve(r);
    ++run.outer_iterations;
    r = problem.residual(run.solution);
    rnorm = r.norm();
    IterationRecord rec;
    rec.ls_G = 1;
    rec.residual = rnorm;
    rec.error = error_of(run.solution, reference);
    run.ledger.push(rec);
  }
  run.converged = rnorm <= settings.outer_tol;
  return run;
}

ContinuationResult continuation_solve(const StageFactory& factory,
                                      const std::vector<double>& betas, const Vector& u0,
                                      const SolverSettings& settings) {
  if (betas.empty()) throw SolverError("continuation needs at least one beta");
  ContinuationResult out;
  Vector u = u0;
  for (double beta : betas) {
    try {
      ContinuationStage stage = factory(beta);
      RunResult run = outer_newton(*stage.system, u, settings, stage.reference);
      if (run.aborted) {
        out.failure = "beta = " + std::to_string(beta) + ": " + run.failure;
        out.betas.push_back(beta);
        out.runs.push_back(std::move(run));
        return out;
      }
      const bool ok = run.converged;
      u = run.solution;
      out.betas.push_back(beta);
      out.runs.push_back(std::move(run));
      if (!ok) {
        out.failure = "beta = " + std::to_string(beta) + ": " + out.runs.back().failure;
        return out;
      }
    } catch (const SolverError& e) {
      out.failure = "beta = " + std::to_string(beta) + ": " + e.what();
      return out;
    }
  }
  out.completed = true;
  return out;
}

}  // namespace raspen
