#pragma once

#include "raspen/types.hpp"

namespace raspen {

/// Index sets of one subdomain. Both sets are sorted, 0-based global cell
/// indices; `owned` is contained in `overlap`.
struct Subdomain {
  IndexSet owned;
  IndexSet overlap;
  /// Positions of the owned cells inside `overlap`, used by the restricted
  /// prolongation.
  IndexSet owned_local;
};

enum class GridKind { line, rectangle };

/// Ends of the x axis, where the coarse interpolation may carry Dirichlet data.
enum class BoundarySide { x_min, x_max };

/// Test functions of the Galerkin coarse problem. `owned_sum` sums residuals
/// over each coarse cell (R~_0); `interpolation_transpose` weights them with
/// the coarse hat functions (P_0^T).
enum class CoarseTest { owned_sum, interpolation_transpose };

/// Overlapping Schwarz decomposition of a structured 1D or 2D cell grid,
/// together with the agglomeration-based coarse operators.
///
/// The layout induces, for each subdomain i,
///   R_i  : restriction to the overlapping set,
///   P_i  : zero extension from the overlapping set,
///   P~_i : extension by the owned (nonoverlapping) cells only,
/// with R_i P_i = I and sum_i P~_i R_i = I. The coarse space has one degree of
/// freedom per subdomain: R_0 averages over owned cells, R~_0 sums over them
/// and P_0 interpolates linearly (bilinearly in 2D) between coarse-cell
/// centers.
///
/// Layouts are immutable once built.
class DecompositionLayout {
 public:
  /// Near-equal contiguous blocks, leading subdomains take the remainder.
  /// Coarse prolongation vanishes at both ends of the line.
  static DecompositionLayout line(Index n_cells, int n_subdomains, int overlap_layers,
                                  CoarseTest test = CoarseTest::interpolation_transpose);

  /// N x N rectangular blocks over an nx x ny grid (cell (ix, iy) has index
  /// iy * nx + ix). Coarse prolongation vanishes on the edge x = nx and is
  /// extended by constants towards the other three edges.
  static DecompositionLayout rectangle(Index nx, Index ny, int n_per_side, int overlap_layers,
                                       CoarseTest test = CoarseTest::interpolation_transpose);

  GridKind kind() const noexcept { return kind_; }
  Index n_cells() const noexcept { return n_cells_; }
  Index nx() const noexcept { return nx_; }
  Index ny() const noexcept { return ny_; }
  int n_subdomains() const noexcept { return static_cast<int>(subdomains_.size()); }
  int overlap_layers() const noexcept { return overlap_layers_; }
  Index n_coarse() const noexcept { return n_subdomains(); }
  CoarseTest coarse_test() const noexcept { return coarse_test_; }

  const Subdomain& subdomain(int i) const;
  const std::vector<Subdomain>& subdomains() const noexcept { return subdomains_; }

  /// Coarse cells coincide with the owned sets.
  const IndexSet& coarse_cells(int i) const { return subdomain(i).owned; }

  Vector restrict_to(int i, const Vector& v) const;
  Vector prolong(int i, const Vector& local) const;
  Vector restricted_prolong(int i, const Vector& local) const;

  /// Accumulating forms: out += P_i local / P~_i local.
  void add_prolong(int i, const Vector& local, Vector& out) const;
  void add_restricted_prolong(int i, const Vector& local, Vector& out) const;

  Vector coarse_restrict_mean(const Vector& v) const;
  Vector coarse_restrict_sum(const Vector& r) const;
  Vector coarse_prolong(const Vector& v0) const;
  /// Residual restriction of the coarse problem, selected by coarse_test().
  Vector coarse_restrict_test(const Vector& r) const;

  /// n_coarse x n_cells, rows average over owned cells.
  const SparseMatrix& coarse_mean_matrix() const noexcept { return r0_; }
  /// n_coarse x n_cells, rows sum over owned cells.
  const SparseMatrix& coarse_sum_matrix() const noexcept { return r0_sum_; }
  /// Either coarse_sum_matrix() or the transpose of the interpolation.
  const SparseMatrix& coarse_test_matrix() const noexcept { return r0_test_; }
  /// n_cells x n_coarse interpolation.
  const SparseMatrix& coarse_prolong_matrix() const noexcept { return p0_; }

  /// Weight of a Dirichlet boundary node in the coarse interpolation: the
  /// hat function that is 1 on the given side and falls linearly to 0 at the
  /// nearest coarse centers. Zero on sides where P_0 extends by constants.
  /// Problems combine these with their boundary values to lift coarse states.
  const Vector& boundary_lift(BoundarySide side) const noexcept {
    return side == BoundarySide::x_min ? lift_min_ : lift_max_;
  }

 private:
  DecompositionLayout() = default;
  void finalize(std::vector<Triplet> prolong_entries);
  void check_invariants() const;

  GridKind kind_ = GridKind::line;
  Index n_cells_ = 0;
  Index nx_ = 0;
  Index ny_ = 1;
  int overlap_layers_ = 0;
  CoarseTest coarse_test_ = CoarseTest::interpolation_transpose;
  std::vector<Subdomain> subdomains_;
  SparseMatrix r0_;
  SparseMatrix r0_sum_;
  SparseMatrix p0_;
  SparseMatrix r0_test_;
  Vector lift_min_;
  Vector lift_max_;
};

inline DecompositionLayout build_1d_layout(
    Index n_cells, int n_subdomains, int overlap_layers,
    CoarseTest test = CoarseTest::interpolation_transpose) {
  return DecompositionLayout::line(n_cells, n_subdomains, overlap_layers, test);
}

inline DecompositionLayout build_2d_layout(
    Index nx, Index ny, int n_per_side, int overlap_layers,
    CoarseTest test = CoarseTest::interpolation_transpose) {
  return DecompositionLayout::rectangle(nx, ny, n_per_side, overlap_layers, test);
}

const char* to_string(CoarseTest test) noexcept;
CoarseTest parse_coarse_test(const std::string& text);

}  // namespace raspen
