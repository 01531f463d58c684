#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jetflow/dynamics.hpp"

namespace jetflow {

enum class IntegratorMethod { Rk4, ImplicitMidpoint };

IntegratorMethod integrator_from_name(const std::string& name);
std::string to_string(IntegratorMethod method);

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::ImplicitMidpoint;
  double dt = 1e-2;
  double t_end = 1.0;
  int observer_stride = 1;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  /// Stop once the constraint-force monitor exceeds this value.
  std::optional<double> stop_on_monitor;

  void validate() const;
};

/// Classical fourth-order Runge-Kutta step.
Vec step_rk4(const PhaseSystem& system, const Vec& z, double dt);

struct MidpointResult {
  Vec state;
  int iterations;
};

/// Implicit midpoint z1 = z0 + dt f((z0 + z1) / 2), solved by Newton's
/// method (finite-difference Jacobian) until the residual is below tol
/// relative to 1 + |z1|.
MidpointResult step_implicit_midpoint(const PhaseSystem& system, const Vec& z, double dt,
                                      double tol = 1e-12, int max_iter = 50);

/// Throws CollisionError when two particles are closer than
/// 1e-8 * length_scale.
void check_collisions(const PhaseSystem& system, const Vec& z);

enum class RunStatus { Completed, MonitorTriggered };

std::string to_string(RunStatus status);

struct Snapshot {
  int step;
  double t;
  Vec state;
};

/// Called with every stored snapshot (initial state, every stride-th step,
/// and the final state).
using Observer = std::function<void(const PhaseSystem&, const Snapshot&)>;

struct Trajectory {
  std::vector<Snapshot> snapshots;
  RunStatus status = RunStatus::Completed;
  int steps = 0;

  const Snapshot& back() const { return snapshots.back(); }
};

Trajectory integrate(const PhaseSystem& system, const Vec& initial, const IntegratorConfig& config,
                     const std::vector<Observer>& observers = {});

/// Monitor used by stop_on_monitor: max |(u.grad)u| at the particles.
double particle_monitor(const PhaseSystem& system, const Vec& z);

}  // namespace jetflow
