#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace raspen {

using Index = std::ptrdiff_t;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;
using IndexSet = std::vector<Index>;

/// Base class for every failure raised by the solver stack.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Thrown when a Jacobian action is requested at a point other than the one
/// the cached linearization was built for.
class StaleCacheError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Nonlinear subdomain or coarse solve that failed to converge, or whose
/// Jacobian could not be factorized.
class LocalSolveError : public SolverError {
 public:
  LocalSolveError(const std::string& what, int subdomain, double last_residual)
      : SolverError(what), subdomain_(subdomain), last_residual_(last_residual) {}

  /// Subdomain id (0-based), or -1 for the coarse problem.
  int subdomain() const noexcept { return subdomain_; }
  double last_residual() const noexcept { return last_residual_; }

 private:
  int subdomain_;
  double last_residual_;
};

/// 64-bit FNV-1a over the raw bytes of a vector. Used to tie cached
/// linearizations to the point they were computed at.
inline std::uint64_t fingerprint(const Vector& v) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(v.data());
  const auto n = static_cast<std::size_t>(v.size()) * sizeof(double);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  h ^= static_cast<std::uint64_t>(v.size());
  return h;
}

inline void require_size(const Vector& v, Index n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(n) +
                         ", got " + std::to_string(v.size()));
  }
}

}  // namespace raspen
