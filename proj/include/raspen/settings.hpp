#pragma once

#include "raspen/types.hpp"

namespace raspen {

struct SolverSettings {
  double inner_tol = 1e-8;
  double outer_tol = 1e-8;
  double gmres_tol = 1e-8;
  int max_inner_iterations = 50;
  int max_outer_iterations = 50;
  int max_gmres_iterations = 1000;
  int max_fixed_point_steps = 500;
  /// Fixed-point runs stop early once the error exceeds this value.
  double divergence_threshold = 1e6;
  int threads = 1;

  void validate() const {
    if (!(inner_tol > 0.0) || !(outer_tol > 0.0) || !(gmres_tol > 0.0)) {
      throw SolverError("solver tolerances must be positive");
    }
    if (max_inner_iterations < 1 || max_outer_iterations < 0 || max_gmres_iterations < 1 ||
        max_fixed_point_steps < 0 || threads < 1) {
      throw SolverError("solver iteration limits must be positive");
    }
  }
};

}  // namespace raspen
