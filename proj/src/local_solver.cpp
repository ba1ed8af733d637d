#include "raspen/local_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "raspen/parallel.hpp"

namespace raspen {
namespace {

std::atomic<std::uint64_t> g_next_token{1};

Index local_position(const IndexSet& overlap, Index global) {
  const auto it = std::lower_bound(overlap.begin(), overlap.end(), global);
  if (it != overlap.end() && *it == global) return static_cast<Index>(it - overlap.begin());
  return -1;
}

}  // namespace

LocalLinearization linearize_local(const SparseMatrix& jacobian_rows, const IndexSet& overlap,
                                   int subdomain) {
  const auto m = static_cast<Index>(overlap.size());
  if (jacobian_rows.rows() != m) throw DimensionError("local linearization: row count mismatch");
  std::vector<Triplet> inner;
  std::vector<Triplet> outer;
  for (Index r = 0; r < m; ++r) {
    for (SparseMatrix::InnerIterator it(jacobian_rows, r); it; ++it) {
      const Index pos = local_position(overlap, it.col());
      if (pos >= 0) {
        inner.emplace_back(r, pos, it.value());
      } else {
        outer.emplace_back(r, it.col(), it.value());
      }
    }
  }
  LocalLinearization lin;
  lin.subdomain = subdomain;
  lin.block.resize(m, m);
  lin.block.setFromTriplets(inner.begin(), inner.end());
  lin.coupling.resize(m, jacobian_rows.cols());
  lin.coupling.setFromTriplets(outer.begin(), outer.end());

  auto lu = std::make_shared<LocalLu>();
  const Eigen::SparseMatrix<double> col_major = lin.block;
  lu->compute(col_major);
  if (lu->info() != Eigen::Success) {
    throw LocalSolveError("singular local Jacobian on subdomain " + std::to_string(subdomain),
                          subdomain, std::numeric_limits<double>::quiet_NaN());
  }
  lin.lu = std::move(lu);
  return lin;
}

Vector LocalLinearization::apply_rows(const Vector& v_global, const IndexSet& overlap) const {
  Vector local(static_cast<Index>(overlap.size()));
  for (std::size_t a = 0; a < overlap.size(); ++a) local[static_cast<Index>(a)] = v_global[overlap[a]];
  return block * local + coupling * v_global;
}

Vector LocalLinearization::solve(const Vector& rhs) const {
  return lu->solve(rhs);
}

LocalSolveResult solve_local(const NonlinearProblem& problem, const DecompositionLayout& layout,
                             int i, const Vector& u, const SolverSettings& settings) {
  require_size(u, problem.dof_count(), "local solve");
  if (layout.n_cells() != problem.dof_count()) {
    throw DimensionError("layout and problem sizes differ");
  }
  const auto& overlap = layout.subdomain(i).overlap;
  const auto m = static_cast<Index>(overlap.size());

  LocalSolveResult result;
  result.subdomain = i;
  result.base_fingerprint = fingerprint(u);
  result.token = g_next_token++;
  result.correction = Vector::Zero(m);

  Vector w = u;
  for (;;) {
    const Vector r = problem.residual_rows(w, overlap);
    result.final_residual = r.norm();
    if (!std::isfinite(result.final_residual)) {
      throw LocalSolveError("non-finite residual on subdomain " + std::to_string(i), i,
                            result.final_residual);
    }
    result.linearization = linearize_local(problem.jacobian_rows(w, overlap), overlap, i);
    if (result.final_residual <= settings.inner_tol) break;
    if (result.inner_iterations >= settings.max_inner_iterations) {
      throw LocalSolveError("subdomain " + std::to_string(i) + " inner Newton did not converge in " +
                                std::to_string(settings.max_inner_iterations) + " iterations",
                            i, result.final_residual);
    }
    result.correction -= result.linearization.solve(r);
    ++result.inner_iterations;
    for (Index a = 0; a < m; ++a) w[overlap[a]] = u[overlap[a]] + result.correction[a];
  }
  return result;
}

Vector apply_local_correction_jacobian(const LocalLinearization& lin,
                                       const DecompositionLayout& layout, const Vector& v) {
  const auto& overlap = layout.subdomain(lin.subdomain).overlap;
  return -lin.solve(lin.apply_rows(v, overlap));
}

Vector local_correction_jacobian_action(const LocalSolveResult& result,
                                        const DecompositionLayout& layout, const Vector& u,
                                        const Vector& v) {
  require_size(v, layout.n_cells(), "local jacobian action");
  if (fingerprint(u) != result.base_fingerprint) {
    throw StaleCacheError("local solve of subdomain " + std::to_string(result.subdomain) +
                          " was computed at a different point");
  }
  return apply_local_correction_jacobian(result.linearization, layout, v);
}

SweepResult sweep_locals(const NonlinearProblem& problem, const DecompositionLayout& layout,
                         const Vector& u, const SolverSettings& settings) {
  SweepResult sweep;
  const int n = layout.n_subdomains();
  sweep.locals.resize(static_cast<std::size_t>(n));
  parallel_for(n, settings.threads, [&](int i) {
    sweep.locals[static_cast<std::size_t>(i)] = solve_local(problem, layout, i, u, settings);
  });
  sweep.ls_in_max = 0;
  sweep.ls_in_min = std::numeric_limits<int>::max();
  for (const auto& r : sweep.locals) {
    sweep.ls_in_max = std::max(sweep.ls_in_max, r.inner_iterations);
    sweep.ls_in_min = std::min(sweep.ls_in_min, r.inner_iterations);
  }
  if (n == 0) sweep.ls_in_min = 0;
  return sweep;
}

}  // namespace raspen
