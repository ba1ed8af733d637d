#pragma once

#include <optional>
#include <string>

#include "raspen/coarse.hpp"
#include "raspen/local_solver.hpp"

namespace raspen {

/// The four nonlinearly preconditioned functions.
///   raspen1: sum_i P~_i C_i(u)
///   aspin1:  sum_i P_i C_i(u)
///   raspen2: P_0 C_0(u) + sum_i P~_i C_i(u + P_0 C_0(u))   (FAS, multiplicative)
///   aspin2:  P_0 C_0^A(u) + sum_i P_i C_i(u)               (additive)
enum class SystemKind { raspen1, aspin1, raspen2, aspin2 };

/// exact: Jacobian of the preconditioned function from the linearizations
/// cached by the subdomain solves. inexact: subdomain blocks of J(u)
/// refactorized after the solves (ASPIN kinds only).
enum class JacobianMode { exact, inexact };

std::string to_string(SystemKind kind);
std::string to_string(JacobianMode mode);
SystemKind parse_system_kind(const std::string& name);
JacobianMode parse_jacobian_mode(const std::string& name);

bool is_two_level(SystemKind kind);
bool is_restricted(SystemKind kind);

/// Work counters of one residual evaluation.
struct EvaluationStats {
  /// Max inner Newton iterations over subdomains and, for two-level kinds,
  /// the coarse solve.
  int ls_in_max = 0;
  /// Min inner Newton iterations over subdomains.
  int ls_in_min = 0;
  int coarse_iterations = 0;
};

/// A preconditioned nonlinear system bound to a problem and a layout. Both
/// must outlive the system.
///
/// A Jacobian action is valid only at the point of the most recent residual
/// evaluation; anything else raises StaleCacheError.
class PreconditionedSystem {
 public:
  PreconditionedSystem(const NonlinearProblem& problem, const DecompositionLayout& layout,
                       SystemKind kind, JacobianMode mode, SolverSettings settings);

  /// Default mode: exact for RASPEN kinds, inexact for ASPIN kinds.
  PreconditionedSystem(const NonlinearProblem& problem, const DecompositionLayout& layout,
                       SystemKind kind, SolverSettings settings = {});

  Vector residual(const Vector& u);
  Vector jacobian_action(const Vector& u, const Vector& v) const;
  /// u + residual(u): one step of the underlying Schwarz fixed-point iteration.
  Vector fixed_point_step(const Vector& u);

  const EvaluationStats& last_stats() const noexcept { return stats_; }
  SystemKind kind() const noexcept { return kind_; }
  JacobianMode mode() const noexcept { return mode_; }
  const NonlinearProblem& problem() const noexcept { return problem_; }
  const DecompositionLayout& layout() const noexcept { return layout_; }
  const SolverSettings& settings() const noexcept { return settings_; }
  Index dof_count() const noexcept { return problem_.dof_count(); }

  /// Coarse correction of the last evaluation (two-level kinds).
  const std::optional<CoarseSolveResult>& last_coarse() const noexcept { return cache_.coarse; }
  /// Coarse solution u_0* (aspin2 only, computed on first use).
  const std::optional<Vector>& coarse_solution() const noexcept { return u0_star_; }

 private:
  struct Cache {
    bool valid = false;
    std::uint64_t point = 0;
    std::vector<LocalLinearization> locals;
    std::optional<CoarseSolveResult> coarse;
    SparseMatrix fine_jacobian;
  };

  void sum_local_actions(const Vector& v, Vector& out) const;

  const NonlinearProblem& problem_;
  const DecompositionLayout& layout_;
  SystemKind kind_;
  JacobianMode mode_;
  SolverSettings settings_;
  Cache cache_;
  EvaluationStats stats_;
  std::optional<Vector> u0_star_;
};

}  // namespace raspen
