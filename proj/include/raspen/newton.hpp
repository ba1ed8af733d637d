#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "raspen/precond.hpp"

namespace raspen {

/// Counters of one outer iteration n.
struct IterationRecord {
  /// GMRES iterations (one linear solve per subdomain each).
  int ls_G = 0;
  /// Max inner Newton iterations of the residual evaluation that started
  /// this iteration.
  int ls_in = 0;
  int ls_min = 0;
  /// Relative l1 error of the iterate after this iteration (NaN without a
  /// reference solution).
  double error = 0.0;
  /// Norm of the preconditioned residual at the iterate after this
  /// iteration; for fixed-point runs the step length.
  double residual = 0.0;
  bool gmres_converged = true;
};

/// Per-iteration work log with LS_n = sum_{j <= n} (ls_in_j + ls_G_j).
class IterationLedger {
 public:
  void push(const IterationRecord& record);
  const std::vector<IterationRecord>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  /// Cumulative LS after iteration n (0-based row index).
  int cumulative(std::size_t n) const { return cumulative_.at(n); }
  int total() const noexcept { return cumulative_.empty() ? 0 : cumulative_.back(); }

 private:
  std::vector<IterationRecord> rows_;
  std::vector<int> cumulative_;
};

struct RunResult {
  Vector solution;
  IterationLedger ledger;
  bool converged = false;
  int outer_iterations = 0;
  double initial_residual = 0.0;
  double initial_error = 0.0;
  /// Empty on success, otherwise why the run stopped.
  std::string failure;
  /// A subdomain or coarse solve failed; the ledger holds the iterations
  /// completed before that.
  bool aborted = false;
};

/// Newton on system.residual(u) = 0 with GMRES on the matrix-free Jacobian,
/// full steps. Converged once ||residual||_2 <= outer_tol. A failed local or
/// coarse solve ends the run with aborted = true and the failing iteration in
/// `failure`.
RunResult outer_newton(PreconditionedSystem& system, const Vector& u0,
                       const SolverSettings& settings,
                       const std::optional<Vector>& reference = std::nullopt);

/// Iterates u <- u + residual(u). The stopping measure is the relative l1
/// error to `reference` when given, the step length otherwise. Stagnation,
/// divergence and failed local solves return converged = false.
RunResult fixed_point_solve(PreconditionedSystem& system, const Vector& u0,
                            const SolverSettings& settings,
                            const std::optional<Vector>& reference = std::nullopt,
                            std::optional<int> max_steps = std::nullopt);

/// Plain Newton on F itself, logged as one global linear solve per iteration.
RunResult global_newton(const NonlinearProblem& problem, const Vector& u0,
                        const SolverSettings& settings,
                        const std::optional<Vector>& reference = std::nullopt);

/// One continuation stage: a problem at a given beta and a system bound to it.
struct ContinuationStage {
  std::shared_ptr<const NonlinearProblem> problem;
  std::shared_ptr<const DecompositionLayout> layout;
  std::shared_ptr<PreconditionedSystem> system;
  std::optional<Vector> reference;
};

using StageFactory = std::function<ContinuationStage(double beta)>;

struct ContinuationResult {
  std::vector<double> betas;
  std::vector<RunResult> runs;
  bool completed = false;
  std::string failure;
};

/// Chains outer_newton over increasing betas, each warm-started from the
/// previous solution. The first failure stops the chain; finished runs are
/// kept.
ContinuationResult continuation_solve(const StageFactory& factory,
                                      const std::vector<double>& betas, const Vector& u0,
                                      const SolverSettings& settings);

}  // namespace raspen
