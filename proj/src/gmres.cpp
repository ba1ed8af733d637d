#include "raspen/gmres.hpp"

#include <cmath>

namespace raspen {

GmresResult gmres(const LinearOperator& op, const Vector& rhs, double tol, int max_iter) {
  const Index n = rhs.size();
  GmresResult result;
  result.solution = Vector::Zero(n);
  auto& report = result.report;
  const double beta = rhs.norm();
  report.history.push_back(1.0);
  if (beta == 0.0) {
    report.converged = true;
    report.relative_residual = 0.0;
    return result;
  }
  const int m = static_cast<int>(std::min<Index>(max_iter, std::max<Index>(n, 1)));

  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(m) + 1);
  basis.push_back(rhs / beta);
  DenseMatrix h = DenseMatrix::Zero(m + 1, m);
  Vector cs = Vector::Zero(m);
  Vector sn = Vector::Zero(m);
  Vector g = Vector::Zero(m + 1);
  g[0] = beta;

  int k = 0;
  bool breakdown = false;
  while (k < m) {
    Vector w = op(basis[static_cast<std::size_t>(k)]);
    if (w.size() != n) throw DimensionError("gmres: operator changed vector length");
    for (int j = 0; j <= k; ++j) {
      h(j, k) = basis[static_cast<std::size_t>(j)].dot(w);
      w -= h(j, k) * basis[static_cast<std::size_t>(j)];
    }
    h(k + 1, k) = w.norm();
    breakdown = h(k + 1, k) < 1e-14 * beta;
    if (!breakdown) basis.push_back(w / h(k + 1, k));

    for (int j = 0; j < k; ++j) {
      const double t = cs[j] * h(j, k) + sn[j] * h(j + 1, k);
      h(j + 1, k) = -sn[j] * h(j, k) + cs[j] * h(j + 1, k);
      h(j, k) = t;
    }
    const double r = std::hypot(h(k, k), h(k + 1, k));
    cs[k] = h(k, k) / r;
    sn[k] = h(k + 1, k) / r;
    h(k, k) = r;
    h(k + 1, k) = 0.0;
    g[k + 1] = -sn[k] * g[k];
    g[k] = cs[k] * g[k];
    ++k;

    report.relative_residual = std::abs(g[k]) / beta;
    report.history.push_back(report.relative_residual);
    if (report.relative_residual <= tol || breakdown) break;
  }

  const Vector y = h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
  for (int j = 0; j < k; ++j) result.solution += y[j] * basis[static_cast<std::size_t>(j)];
  report.iterations = k;
  report.converged = report.relative_residual <= tol || breakdown;
  return result;
}

}  // namespace raspen
