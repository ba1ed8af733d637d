#include "raspen/precond.hpp"

#include <algorithm>

#include "raspen/parallel.hpp"

namespace raspen {

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::raspen1: return "raspen1";
    case SystemKind::aspin1: return "aspin1";
    case SystemKind::raspen2: return "raspen2";
    case SystemKind::aspin2: return "aspin2";
  }
  return "unknown";
}

std::string to_string(JacobianMode mode) {
  return mode == JacobianMode::exact ? "exact" : "inexact";
}

SystemKind parse_system_kind(const std::string& name) {
  if (name == "raspen1") return SystemKind::raspen1;
  if (name == "aspin1") return SystemKind::aspin1;
  if (name == "raspen2") return SystemKind::raspen2;
  if (name == "aspin2") return SystemKind::aspin2;
  throw SolverError("unknown preconditioned system '" + name + "'");
}

JacobianMode parse_jacobian_mode(const std::string& name) {
  if (name == "exact") return JacobianMode::exact;
  if (name == "inexact") return JacobianMode::inexact;
  throw SolverError("unknown jacobian mode '" + name + "'");
}

bool is_two_level(SystemKind kind) {
  return kind == SystemKind::raspen2 || kind == SystemKind::aspin2;
}

bool is_restricted(SystemKind kind) {
  return kind == SystemKind::raspen1 || kind == SystemKind::raspen2;
}

PreconditionedSystem::PreconditionedSystem(const NonlinearProblem& problem,
                                           const DecompositionLayout& layout, SystemKind kind,
                                           JacobianMode mode, SolverSettings settings)
    : problem_(problem), layout_(layout), kind_(kind), mode_(mode), settings_(settings) {
  settings_.validate();
  if (layout.n_cells() != problem.dof_count()) {
    throw DimensionError("layout and problem sizes differ");
  }
  if (is_restricted(kind) && mode == JacobianMode::inexact) {
    throw SolverError("inexact Jacobian is only defined for ASPIN kinds");
  }
}

PreconditionedSystem::PreconditionedSystem(const NonlinearProblem& problem,
                                           const DecompositionLayout& layout, SystemKind kind,
                                           SolverSettings settings)
    : PreconditionedSystem(problem, layout, kind,
                           is_restricted(kind) ? JacobianMode::exact : JacobianMode::inexact,
                           settings) {}

Vector PreconditionedSystem::residual(const Vector& u) {
  require_size(u, dof_count(), "preconditioned residual");
  cache_.valid = false;
  cache_.coarse.reset();
  stats_ = {};

  Vector out = Vector::Zero(dof_count());
  Vector sweep_point = u;
  if (kind_ == SystemKind::raspen2) {
    cache_.coarse = fas_correction(problem_, layout_, u, settings_);
    const Vector coarse_step = layout_.coarse_prolong(cache_.coarse->correction);
    out += coarse_step;
    sweep_point += coarse_step;
  } else if (kind_ == SystemKind::aspin2) {
    if (!u0_star_) u0_star_ = aspin_coarse_setup(problem_, layout_, settings_);
    cache_.coarse = aspin_coarse_correction(problem_, layout_, u, *u0_star_, settings_);
    out += layout_.coarse_prolong(cache_.coarse->correction);
  }

  SweepResult sweep = sweep_locals(problem_, layout_, sweep_point, settings_);
  for (const auto& local : sweep.locals) {
    if (is_restricted(kind_)) {
      layout_.add_restricted_prolong(local.subdomain, local.correction, out);
    } else {
      layout_.add_prolong(local.subdomain, local.correction, out);
    }
  }

  stats_.ls_in_max = sweep.ls_in_max;
  stats_.ls_in_min = sweep.ls_in_min;
  if (cache_.coarse) {
    stats_.coarse_iterations = cache_.coarse->inner_iterations;
    stats_.ls_in_max = std::max(stats_.ls_in_max, stats_.coarse_iterations);
  }

  if (is_two_level(kind_) || mode_ == JacobianMode::inexact) {
    cache_.fine_jacobian = problem_.jacobian(u);
  }
  const int n = layout_.n_subdomains();
  cache_.locals.assign(static_cast<std::size_t>(n), {});
  if (mode_ == JacobianMode::exact) {
    for (int i = 0; i < n; ++i) {
      cache_.locals[static_cast<std::size_t>(i)] =
          std::move(sweep.locals[static_cast<std::size_t>(i)].linearization);
    }
  } else {
    parallel_for(n, settings_.threads, [&](int i) {
      const auto& overlap = layout_.subdomain(i).overlap;
      cache_.locals[static_cast<std::size_t>(i)] =
          linearize_local(problem_.jacobian_rows(u, overlap), overlap, i);
    });
  }
  cache_.point = fingerprint(u);
  cache_.valid = true;
  return out;
}

void PreconditionedSystem::sum_local_actions(const Vector& v, Vector& out) const {
  const int n = layout_.n_subdomains();
  std::vector<Vector> parts(static_cast<std::size_t>(n));
  parallel_for(n, settings_.threads, [&](int i) {
    parts[static_cast<std::size_t>(i)] =
        apply_local_correction_jacobian(cache_.locals[static_cast<std::size_t>(i)], layout_, v);
  });
  for (int i = 0; i < n; ++i) {
    if (is_restricted(kind_)) {
      layout_.add_restricted_prolong(i, parts[static_cast<std::size_t>(i)], out);
    } else {
      layout_.add_prolong(i, parts[static_cast<std::size_t>(i)], out);
    }
  }
}

Vector PreconditionedSystem::jacobian_action(const Vector& u, const Vector& v) const {
  require_size(v, dof_count(), "jacobian action direction");
  if (!cache_.valid || fingerprint(u) != cache_.point) {
    throw StaleCacheError("jacobian action requested away from the last residual evaluation");
  }
  Vector out = Vector::Zero(dof_count());
  switch (kind_) {
    case SystemKind::raspen1:
    case SystemKind::aspin1:
      sum_local_actions(v, out);
      break;
    case SystemKind::raspen2: {
      const Vector jv = cache_.fine_jacobian * v;
      const Vector coarse_step =
          layout_.coarse_prolong(apply_fas_correction_jacobian(*cache_.coarse, layout_, v, jv));
      out += coarse_step;
      sum_local_actions(v + coarse_step, out);
      break;
    }
    case SystemKind::aspin2: {
      const Vector jv = cache_.fine_jacobian * v;
      out += layout_.coarse_prolong(apply_aspin_coarse_jacobian(*cache_.coarse, layout_, jv));
      sum_local_actions(v, out);
      break;
    }
  }
  return out;
}

Vector PreconditionedSystem::fixed_point_step(const Vector& u) {
  return u + residual(u);
}

}  // namespace raspen
