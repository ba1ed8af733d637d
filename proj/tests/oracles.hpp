#pragma once

// Independent reference computations for the tests: finite differences,
// dense linear algebra and a brute-force frozen-exterior Newton. None of
// them calls the solver code they are used to check.

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <random>

#include "raspen/decomposition.hpp"
#include "raspen/problem.hpp"

namespace oracle {

using raspen::DenseMatrix;
using raspen::Index;
using raspen::IndexSet;
using raspen::Vector;

inline Vector random_vector(Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

/// (f(u + eps v) - f(u - eps v)) / (2 eps).
inline Vector central_difference(const std::function<Vector(const Vector&)>& f, const Vector& u,
                                 const Vector& v, double eps) {
  return (f(u + eps * v) - f(u - eps * v)) / (2.0 * eps);
}

inline double relative_error(const Vector& a, const Vector& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

/// Dense Jacobian by central differences, column by column.
inline DenseMatrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& u,
                               double eps = 1e-6) {
  const Index n = u.size();
  DenseMatrix J(f(u).size(), n);
  for (Index j = 0; j < n; ++j) {
    Vector e = Vector::Zero(n);
    e[j] = 1.0;
    J.col(j) = central_difference(f, u, e, eps);
  }
  return J;
}

/// 0/1 selection matrix R_i (|set| x n).
inline DenseMatrix selection(const IndexSet& set, Index n) {
  DenseMatrix R = DenseMatrix::Zero(static_cast<Index>(set.size()), n);
  for (std::size_t a = 0; a < set.size(); ++a) R(static_cast<Index>(a), set[a]) = 1.0;
  return R;
}

/// P~_i: extension from the overlap set that keeps only owned positions.
inline DenseMatrix restricted_extension(const raspen::Subdomain& s, Index n) {
  DenseMatrix P = DenseMatrix::Zero(n, static_cast<Index>(s.overlap.size()));
  for (std::size_t a = 0; a < s.overlap.size(); ++a) {
    const Index cell = s.overlap[a];
    if (std::binary_search(s.owned.begin(), s.owned.end(), cell)) P(cell, static_cast<Index>(a)) = 1.0;
  }
  return P;
}

/// sum_i P~_i A_i^{-1} R_i with A_i = R_i A R_i^T.
inline DenseMatrix dense_ras(const raspen::DecompositionLayout& layout, const DenseMatrix& A) {
  const Index n = A.rows();
  DenseMatrix M = DenseMatrix::Zero(n, n);
  for (const auto& s : layout.subdomains()) {
    const DenseMatrix R = selection(s.overlap, n);
    const DenseMatrix Ai = R * A * R.transpose();
    M += restricted_extension(s, n) * Ai.inverse() * R;
  }
  return M;
}

/// sum_i P_i A_i^{-1} R_i.
inline DenseMatrix dense_as(const raspen::DecompositionLayout& layout, const DenseMatrix& A) {
  const Index n = A.rows();
  DenseMatrix M = DenseMatrix::Zero(n, n);
  for (const auto& s : layout.subdomains()) {
    const DenseMatrix R = selection(s.overlap, n);
    const DenseMatrix Ai = R * A * R.transpose();
    M += R.transpose() * Ai.inverse() * R;
  }
  return M;
}

/// Solves R_i F(w) = 0 for the entries of w on `set`, entries outside held
/// at u. Dense Newton with a finite-difference Jacobian and backtracking.
inline Vector frozen_exterior_newton(const raspen::NonlinearProblem& problem, const IndexSet& set,
                                     const Vector& u, double tol = 1e-12, int max_it = 100) {
  Vector w = u;
  auto local_residual = [&](const Vector& x) {
    Vector full = w;
    for (std::size_t a = 0; a < set.size(); ++a) full[set[a]] = x[static_cast<Index>(a)];
    const Vector r = problem.residual(full);
    Vector out(static_cast<Index>(set.size()));
    for (std::size_t a = 0; a < set.size(); ++a) out[static_cast<Index>(a)] = r[set[a]];
    return out;
  };
  Vector x(static_cast<Index>(set.size()));
  for (std::size_t a = 0; a < set.size(); ++a) x[static_cast<Index>(a)] = u[set[a]];
  for (int it = 0; it < max_it; ++it) {
    const Vector r = local_residual(x);
    if (r.norm() <= tol) break;
    const DenseMatrix J = fd_jacobian(local_residual, x, 1e-7);
    const Vector step = J.fullPivLu().solve(-r);
    double alpha = 1.0;
    while (alpha > 1e-8 && !(local_residual(x + alpha * step).norm() < r.norm())) alpha *= 0.5;
    x += alpha * step;
  }
  for (std::size_t a = 0; a < set.size(); ++a) w[set[a]] = x[static_cast<Index>(a)];
  return w;
}

/// F(u) = A u - b with a dense A, for affine checks on arbitrary matrices.
class AffineProblem final : public raspen::NonlinearProblem {
 public:
  AffineProblem(DenseMatrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {}
  Index dof_count() const override { return A_.rows(); }
  std::string name() const override { return "affine"; }
  Vector residual(const Vector& u) const override { return A_ * u - b_; }
  raspen::SparseMatrix jacobian(const Vector&) const override { return A_.sparseView(); }
  const DenseMatrix& matrix() const { return A_; }
  const Vector& rhs() const { return b_; }

 private:
  DenseMatrix A_;
  Vector b_;
};

/// Diagonally dominant 1D three-point matrix with random positive couplings.
inline DenseMatrix random_tridiagonal(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.5, 2.0);
  DenseMatrix A = DenseMatrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) {
    const double t = d(rng);
    A(i, i) += t;
    A(i + 1, i + 1) += t;
    A(i, i + 1) -= t;
    A(i + 1, i) -= t;
  }
  A(0, 0) += d(rng);
  A(n - 1, n - 1) += d(rng);
  return A;
}

}  // namespace oracle
