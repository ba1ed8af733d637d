#pragma once

#include <cstdint>

#include "raspen/problem.hpp"

namespace raspen {

/// Below this value of beta the flux law is replaced by its Darcy limit.
inline constexpr double kDarcyThreshold = 1e-12;

/// Forchheimer flux q(g) = sgn(g) (-1 + sqrt(1 + 4 beta |g|)) / (2 beta);
/// q(g) = g when beta is (numerically) zero.
double q_flux(double g, double beta);
/// q'(g) = 1 / sqrt(1 + 4 beta |g|).
double q_flux_derivative(double g, double beta);

/// TPFA transmissibilities T_{1/2}, ..., T_{M+1/2} on a uniform mesh of
/// width h; interior faces use the harmonic combination of the two
/// half-cell resistances. Returns M + 1 values.
Vector build_transmissibilities(double h, const Vector& lambda);

struct ForchheimerSetup {
  double length = 1.5;
  double beta = 1.0;
  /// Cell-averaged permeability, one entry per cell.
  Vector lambda;
  /// Cell-integrated source f_K.
  Vector source;
  double u_left = 0.0;
  double u_right = 1.0;
};

/// Parameters of the random high-contrast stand-in field.
struct RandomContrastOptions {
  std::uint64_t seed = 1;
  double log10_min = -2.0;
  double log10_max = 2.0;
  /// Cells sharing one random permeability value.
  Index correlation_cells = 5;
  double source_amplitude = 1.0;
  double source_frequency = 10.0;
};

/// 1D Forchheimer flow on (0, L) discretized with two-point flux finite
/// volumes:
///   q(T_{K+1/2}(u_K - u_{K+1})) + q(T_{K-1/2}(u_K - u_{K-1})) - f_K = 0.
class ForchheimerProblem1D final : public NonlinearProblem {
 public:
  explicit ForchheimerProblem1D(ForchheimerSetup setup);

  /// lambda(x) = cos(x), f(x) = cos(x), both integrated exactly per cell.
  static ForchheimerProblem1D smooth(Index cells, double beta, double length = 1.5);

  /// Log-uniform piecewise constant permeability with an oscillating source
  /// f(x) = A sin(omega pi x).
  static ForchheimerProblem1D random_contrast(Index cells, double beta,
                                              const RandomContrastOptions& options,
                                              double length = 1.5);

  Index dof_count() const override { return static_cast<Index>(setup_.lambda.size()); }
  std::string name() const override { return "forchheimer1d"; }

  Vector residual(const Vector& u) const override;
  SparseMatrix jacobian(const Vector& u) const override;
  Vector residual_rows(const Vector& u, const IndexSet& rows) const override;
  SparseMatrix jacobian_rows(const Vector& u, const IndexSet& rows) const override;
  Vector coarse_lifting(const DecompositionLayout& layout) const override;

  const ForchheimerSetup& setup() const noexcept { return setup_; }
  const Vector& transmissibilities() const noexcept { return trans_; }
  double cell_width() const noexcept { return h_; }

  /// Same mesh and fields with another Forchheimer parameter.
  ForchheimerProblem1D with_beta(double beta) const;

 private:
  double row_residual(const Vector& u, Index k) const;
  void row_jacobian(const Vector& u, Index row_out, Index k, std::vector<Triplet>& out) const;

  ForchheimerSetup setup_;
  double h_;
  Vector trans_;
};

}  // namespace raspen
