#pragma once

#include <Eigen/SparseLU>
#include <memory>

#include "raspen/decomposition.hpp"
#include "raspen/problem.hpp"
#include "raspen/settings.hpp"

namespace raspen {

using LocalLu = Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>;

/// Rows M_i of J at some point, split into the square block A_ii = R_i J P_i
/// (factorized) and the coupling R_i J (I - P_i R_i), i.e. the columns that
/// act on the Dirichlet data outside the subdomain.
struct LocalLinearization {
  int subdomain = -1;
  SparseMatrix block;
  SparseMatrix coupling;
  std::shared_ptr<const LocalLu> lu;

  /// R_i J v = A_ii R_i v + coupling v for a global vector v.
  Vector apply_rows(const Vector& v_global, const IndexSet& overlap) const;
  /// A_ii^{-1} rhs.
  Vector solve(const Vector& rhs) const;
};

/// Splits the |M_i| x n row block of a Jacobian and factorizes its square
/// part. Throws LocalSolveError if the block is singular.
LocalLinearization linearize_local(const SparseMatrix& jacobian_rows, const IndexSet& overlap,
                                   int subdomain);

/// Outcome of the nonlinear subdomain solve R_i F(u + P_i C_i(u)) = 0.
struct LocalSolveResult {
  int subdomain = -1;
  /// C_i(u), a vector on the overlapping set.
  Vector correction;
  /// Linearization at u^(i) = u + P_i C_i(u).
  LocalLinearization linearization;
  /// Linear subdomain solves performed by the inner Newton loop.
  int inner_iterations = 0;
  double final_residual = 0.0;
  /// Fingerprint of the u this result was computed at.
  std::uint64_t base_fingerprint = 0;
  /// Monotonically increasing evaluation counter.
  std::uint64_t token = 0;
};

/// Inner Newton from the zero correction, full steps. Throws LocalSolveError
/// on nonconvergence or a singular local Jacobian.
LocalSolveResult solve_local(const NonlinearProblem& problem, const DecompositionLayout& layout,
                             int i, const Vector& u, const SolverSettings& settings);

/// dC_i/du v = -A_ii^{-1} R_i J(u^(i)) v, reusing the cached factorization.
/// Throws StaleCacheError if `u` is not the point `result` was computed at.
Vector local_correction_jacobian_action(const LocalSolveResult& result,
                                        const DecompositionLayout& layout, const Vector& u,
                                        const Vector& v);

/// Unchecked form of local_correction_jacobian_action for callers that have
/// already validated the cache.
Vector apply_local_correction_jacobian(const LocalLinearization& lin,
                                       const DecompositionLayout& layout, const Vector& v);

struct SweepResult {
  std::vector<LocalSolveResult> locals;
  int ls_in_max = 0;
  int ls_in_min = 0;
};

/// solve_local for every subdomain, fork-join over settings.threads workers.
SweepResult sweep_locals(const NonlinearProblem& problem, const DecompositionLayout& layout,
                         const Vector& u, const SolverSettings& settings);

}  // namespace raspen
