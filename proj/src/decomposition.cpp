#include "raspen/decomposition.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace raspen {
namespace {

struct Block {
  Index begin;
  Index end;
};

// Contiguous near-equal split; the first (n mod parts) blocks get one extra cell.
std::vector<Block> split_blocks(Index n, int parts) {
  std::vector<Block> blocks;
  blocks.reserve(static_cast<std::size_t>(parts));
  const Index base = n / parts;
  const Index extra = n % parts;
  Index start = 0;
  for (int p = 0; p < parts; ++p) {
    const Index len = base + (p < extra ? 1 : 0);
    blocks.push_back({start, start + len});
    start += len;
  }
  return blocks;
}

void check_overlap_fits(const std::vector<Block>& blocks, int k, const char* axis) {
  for (std::size_t p = 0; p < blocks.size(); ++p) {
    const Index len = blocks[p].end - blocks[p].begin;
    const bool has_neighbor = blocks.size() > 1;
    if (has_neighbor && k > len) {
      throw SolverError(std::string("overlap of ") + std::to_string(k) +
                        " layers reaches past owned block " + std::to_string(p) + " along " +
                        axis + " (block has " + std::to_string(len) + " cells)");
    }
  }
}

Block widen(const Block& b, int k, Index n) {
  return {std::max<Index>(0, b.begin - k), std::min<Index>(n, b.end + k)};
}

enum class EndCondition { zero, constant };

struct Weight {
  int coarse;
  double value;
};

// Piecewise linear hat weights through `centers` on [0, length].
void interp_weights(double x, const std::vector<double>& centers, double length,
                    EndCondition left, EndCondition right, std::vector<Weight>& out) {
  out.clear();
  const int last = static_cast<int>(centers.size()) - 1;
  if (x <= centers.front()) {
    const double w = left == EndCondition::constant ? 1.0 : x / centers.front();
    out.push_back({0, w});
    return;
  }
  if (x >= centers.back()) {
    const double w = right == EndCondition::constant
                         ? 1.0
                         : (length - x) / (length - centers.back());
    out.push_back({last, w});
    return;
  }
  const auto it = std::upper_bound(centers.begin(), centers.end(), x);
  const int j = static_cast<int>(it - centers.begin()) - 1;
  const double t = (x - centers[j]) / (centers[j + 1] - centers[j]);
  out.push_back({j, 1.0 - t});
  out.push_back({j + 1, t});
}

std::vector<double> block_centers(const std::vector<Block>& blocks) {
  std::vector<double> c;
  c.reserve(blocks.size());
  for (const auto& b : blocks) c.push_back(0.5 * static_cast<double>(b.begin + b.end));
  return c;
}

}  // namespace

DecompositionLayout DecompositionLayout::line(Index n_cells, int n_subdomains, int overlap_layers,
                                              CoarseTest test) {
  if (n_subdomains < 1 || n_cells < n_subdomains) {
    throw SolverError("line layout needs 1 <= subdomains <= cells");
  }
  if (overlap_layers < 0) throw SolverError("overlap layers must be nonnegative");
  const auto blocks = split_blocks(n_cells, n_subdomains);
  check_overlap_fits(blocks, overlap_layers, "x");

  DecompositionLayout layout;
  layout.kind_ = GridKind::line;
  layout.n_cells_ = n_cells;
  layout.nx_ = n_cells;
  layout.ny_ = 1;
  layout.overlap_layers_ = overlap_layers;
  layout.coarse_test_ = test;
  for (const auto& b : blocks) {
    Subdomain s;
    const Block wide = widen(b, overlap_layers, n_cells);
    for (Index c = b.begin; c < b.end; ++c) s.owned.push_back(c);
    for (Index c = wide.begin; c < wide.end; ++c) s.overlap.push_back(c);
    for (Index c = b.begin; c < b.end; ++c) s.owned_local.push_back(c - wide.begin);
    layout.subdomains_.push_back(std::move(s));
  }

  const auto centers = block_centers(blocks);
  std::vector<Triplet> entries;
  std::vector<Weight> w;
  layout.lift_min_ = Vector::Zero(n_cells);
  layout.lift_max_ = Vector::Zero(n_cells);
  for (Index c = 0; c < n_cells; ++c) {
    const double x = static_cast<double>(c) + 0.5;
    interp_weights(x, centers, static_cast<double>(n_cells), EndCondition::zero,
                   EndCondition::zero, w);
    for (const auto& [j, val] : w) entries.emplace_back(c, j, val);
    if (x < centers.front()) layout.lift_min_[c] = 1.0 - x / centers.front();
    if (x > centers.back()) {
      layout.lift_max_[c] =
          (x - centers.back()) / (static_cast<double>(n_cells) - centers.back());
    }
  }
  layout.finalize(std::move(entries));
  return layout;
}

DecompositionLayout DecompositionLayout::rectangle(Index nx, Index ny, int n_per_side,
                                                   int overlap_layers, CoarseTest test) {
  if (n_per_side < 1 || nx < 1 || ny < 1) throw SolverError("rectangle layout needs positive sizes");
  if (nx % n_per_side != 0 || ny % n_per_side != 0) {
    throw SolverError("rectangle layout needs nx and ny divisible by the subdomains per side");
  }
  if (overlap_layers < 0) throw SolverError("overlap layers must be nonnegative");
  const auto xblocks = split_blocks(nx, n_per_side);
  const auto yblocks = split_blocks(ny, n_per_side);
  check_overlap_fits(xblocks, overlap_layers, "x");
  check_overlap_fits(yblocks, overlap_layers, "y");

  DecompositionLayout layout;
  layout.kind_ = GridKind::rectangle;
  layout.n_cells_ = nx * ny;
  layout.nx_ = nx;
  layout.ny_ = ny;
  layout.overlap_layers_ = overlap_layers;
  layout.coarse_test_ = test;
  for (int by = 0; by < n_per_side; ++by) {
    for (int bx = 0; bx < n_per_side; ++bx) {
      const Block ox = xblocks[bx];
      const Block oy = yblocks[by];
      const Block wx = widen(ox, overlap_layers, nx);
      const Block wy = widen(oy, overlap_layers, ny);
      Subdomain s;
      Index pos = 0;
      for (Index iy = wy.begin; iy < wy.end; ++iy) {
        for (Index ix = wx.begin; ix < wx.end; ++ix, ++pos) {
          const Index cell = iy * nx + ix;
          s.overlap.push_back(cell);
          if (ix >= ox.begin && ix < ox.end && iy >= oy.begin && iy < oy.end) {
            s.owned.push_back(cell);
            s.owned_local.push_back(pos);
          }
        }
      }
      layout.subdomains_.push_back(std::move(s));
    }
  }

  const auto cx = block_centers(xblocks);
  const auto cy = block_centers(yblocks);
  std::vector<Triplet> entries;
  std::vector<Weight> wx;
  std::vector<Weight> wy;
  layout.lift_min_ = Vector::Zero(nx * ny);
  layout.lift_max_ = Vector::Zero(nx * ny);
  for (Index iy = 0; iy < ny; ++iy) {
    interp_weights(static_cast<double>(iy) + 0.5, cy, static_cast<double>(ny),
                   EndCondition::constant, EndCondition::constant, wy);
    for (Index ix = 0; ix < nx; ++ix) {
      const double x = static_cast<double>(ix) + 0.5;
      interp_weights(x, cx, static_cast<double>(nx), EndCondition::constant, EndCondition::zero,
                     wx);
      if (x > cx.back()) {
        layout.lift_max_[iy * nx + ix] = (x - cx.back()) / (static_cast<double>(nx) - cx.back());
      }
      for (const auto& [jy, vy] : wy) {
        for (const auto& [jx, vx] : wx) {
          entries.emplace_back(iy * nx + ix, jy * n_per_side + jx, vx * vy);
        }
      }
    }
  }
  layout.finalize(std::move(entries));
  return layout;
}

void DecompositionLayout::finalize(std::vector<Triplet> prolong_entries) {
  const Index n0 = n_coarse();
  p0_.resize(n_cells_, n0);
  p0_.setFromTriplets(prolong_entries.begin(), prolong_entries.end());
  p0_.makeCompressed();

  std::vector<Triplet> mean;
  std::vector<Triplet> sum;
  for (int i = 0; i < n_subdomains(); ++i) {
    const auto& owned = subdomains_[i].owned;
    const double inv = 1.0 / static_cast<double>(owned.size());
    for (Index c : owned) {
      mean.emplace_back(i, c, inv);
      sum.emplace_back(i, c, 1.0);
    }
  }
  r0_.resize(n0, n_cells_);
  r0_.setFromTriplets(mean.begin(), mean.end());
  r0_sum_.resize(n0, n_cells_);
  r0_sum_.setFromTriplets(sum.begin(), sum.end());
  if (coarse_test_ == CoarseTest::owned_sum) {
    r0_test_ = r0_sum_;
  } else {
    r0_test_ = SparseMatrix(p0_.transpose());
  }
  r0_test_.makeCompressed();
  check_invariants();
}

void DecompositionLayout::check_invariants() const {
  std::vector<int> owner(static_cast<std::size_t>(n_cells_), -1);
  for (int i = 0; i < n_subdomains(); ++i) {
    const auto& s = subdomains_[i];
    for (Index c : s.owned) {
      if (owner[c] != -1) throw SolverError("owned sets overlap at cell " + std::to_string(c));
      owner[c] = i;
    }
    if (!std::includes(s.overlap.begin(), s.overlap.end(), s.owned.begin(), s.owned.end())) {
      throw SolverError("owned set is not contained in overlap set of subdomain " +
                        std::to_string(i));
    }
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end()) {
    throw SolverError("owned sets do not cover every cell");
  }
}

const Subdomain& DecompositionLayout::subdomain(int i) const {
  if (i < 0 || i >= n_subdomains()) {
    throw DimensionError("subdomain index " + std::to_string(i) + " out of range");
  }
  return subdomains_[static_cast<std::size_t>(i)];
}

Vector DecompositionLayout::restrict_to(int i, const Vector& v) const {
  require_size(v, n_cells_, "restrict");
  const auto& idx = subdomain(i).overlap;
  Vector out(static_cast<Index>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a) out[static_cast<Index>(a)] = v[idx[a]];
  return out;
}

void DecompositionLayout::add_prolong(int i, const Vector& local, Vector& out) const {
  const auto& idx = subdomain(i).overlap;
  require_size(local, static_cast<Index>(idx.size()), "prolong");
  require_size(out, n_cells_, "prolong target");
  for (std::size_t a = 0; a < idx.size(); ++a) out[idx[a]] += local[static_cast<Index>(a)];
}

void DecompositionLayout::add_restricted_prolong(int i, const Vector& local, Vector& out) const {
  const auto& s = subdomain(i);
  require_size(local, static_cast<Index>(s.overlap.size()), "restricted prolong");
  require_size(out, n_cells_, "restricted prolong target");
  for (std::size_t a = 0; a < s.owned.size(); ++a) out[s.owned[a]] += local[s.owned_local[a]];
}

Vector DecompositionLayout::prolong(int i, const Vector& local) const {
  Vector out = Vector::Zero(n_cells_);
  add_prolong(i, local, out);
  return out;
}

Vector DecompositionLayout::restricted_prolong(int i, const Vector& local) const {
  Vector out = Vector::Zero(n_cells_);
  add_restricted_prolong(i, local, out);
  return out;
}

Vector DecompositionLayout::coarse_restrict_mean(const Vector& v) const {
  require_size(v, n_cells_, "coarse restrict");
  return r0_ * v;
}

Vector DecompositionLayout::coarse_restrict_sum(const Vector& r) const {
  require_size(r, n_cells_, "coarse restrict (sum)");
  return r0_sum_ * r;
}

Vector DecompositionLayout::coarse_restrict_test(const Vector& r) const {
  require_size(r, n_cells_, "coarse restrict (test)");
  return r0_test_ * r;
}

Vector DecompositionLayout::coarse_prolong(const Vector& v0) const {
  require_size(v0, n_coarse(), "coarse prolong");
  return p0_ * v0;
}

const char* to_string(CoarseTest test) noexcept {
  return test == CoarseTest::owned_sum ? "owned-sum" : "interpolation-transpose";
}

CoarseTest parse_coarse_test(const std::string& text) {
  if (text == "owned-sum" || text == "sum") return CoarseTest::owned_sum;
  if (text == "interpolation-transpose" || text == "galerkin") {
    return CoarseTest::interpolation_transpose;
  }
  throw SolverError("unknown coarse test space '" + text + "'");
}

}  // namespace raspen
