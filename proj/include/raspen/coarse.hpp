#pragma once

#include <Eigen/LU>
#include <memory>

#include "raspen/decomposition.hpp"
#include "raspen/problem.hpp"
#include "raspen/settings.hpp"

namespace raspen {

/// Galerkin coarse function F_0(u_0) = T_0 F(P_0 u_0 + g). T_0 is the layout's
/// coarse test matrix and g the problem's Dirichlet lifting.
Vector coarse_residual(const NonlinearProblem& problem, const DecompositionLayout& layout,
                       const Vector& u0);

/// T_0 J(P_0 u_0 + g) P_0, dense.
DenseMatrix coarse_jacobian(const NonlinearProblem& problem, const DecompositionLayout& layout,
                            const Vector& u0);

using CoarseLu = Eigen::PartialPivLU<DenseMatrix>;

struct CoarseSolveResult {
  /// C_0(u) (FAS) or C_0^A(u) (ASPIN).
  Vector correction;
  /// F_0'(R_0 u), the Jacobian at the FAS initial guess. Empty for ASPIN.
  DenseMatrix j0;
  /// Jacobian at the converged coarse iterate, and its factorization.
  DenseMatrix j0_hat;
  std::shared_ptr<const CoarseLu> j0_hat_lu;
  int inner_iterations = 0;
  double final_residual = 0.0;
  std::uint64_t base_fingerprint = 0;
};

/// Solves F_0(R_0 u + C_0) = F_0(R_0 u) - T_0 F(u) by Newton from R_0 u.
CoarseSolveResult fas_correction(const NonlinearProblem& problem,
                                 const DecompositionLayout& layout, const Vector& u,
                                 const SolverSettings& settings);

/// dC_0/du v = -R_0 v + Ĵ_0^{-1}(J_0 R_0 v - T_0 J(u) v).
Vector fas_correction_jacobian_action(const CoarseSolveResult& result,
                                      const NonlinearProblem& problem,
                                      const DecompositionLayout& layout, const Vector& u,
                                      const Vector& v);

/// Same as above with J(u) v supplied by the caller and no cache check.
Vector apply_fas_correction_jacobian(const CoarseSolveResult& result,
                                     const DecompositionLayout& layout, const Vector& v,
                                     const Vector& jv);

/// Coarse solution u_0* with F_0(u_0*) = 0, Newton from zero.
Vector aspin_coarse_setup(const NonlinearProblem& problem, const DecompositionLayout& layout,
                          const SolverSettings& settings);

/// Solves F_0(C_0^A + u_0*) = -T_0 F(u) by Newton from u_0*.
CoarseSolveResult aspin_coarse_correction(const NonlinearProblem& problem,
                                          const DecompositionLayout& layout, const Vector& u,
                                          const Vector& u0_star, const SolverSettings& settings);

/// dC_0^A/du v = -Ĵ_0^{-1} T_0 J(u) v.
Vector aspin_coarse_jacobian_action(const CoarseSolveResult& result,
                                    const NonlinearProblem& problem,
                                    const DecompositionLayout& layout, const Vector& u,
                                    const Vector& v);

Vector apply_aspin_coarse_jacobian(const CoarseSolveResult& result,
                                   const DecompositionLayout& layout, const Vector& jv);

}  // namespace raspen
