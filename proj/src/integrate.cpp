#include "jetflow/integrate.hpp"

#include <cmath>
#include <sstream>

#include "jetflow/errors.hpp"

namespace jetflow {

IntegratorMethod integrator_from_name(const std::string& name) {
  if (name == "rk4") return IntegratorMethod::Rk4;
  if (name == "implicit_midpoint") return IntegratorMethod::ImplicitMidpoint;
  throw ConfigError("unknown integrator '" + name + "' (expected rk4 or implicit_midpoint)");
}

std::string to_string(IntegratorMethod method) {
  return method == IntegratorMethod::Rk4 ? "rk4" : "implicit_midpoint";
}

std::string to_string(RunStatus status) {
  return status == RunStatus::Completed ? "completed" : "monitor-triggered";
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be nonnegative");
  if (observer_stride < 1) throw ConfigError("observer_stride must be at least 1");
  if (!(newton_tol > 0.0)) throw ConfigError("newton_tol must be positive");
  if (newton_max_iter < 1) throw ConfigError("newton_max_iter must be at least 1");
  if (stop_on_monitor && !(*stop_on_monitor >= 0.0)) {
    throw ConfigError("stop_on_monitor must be nonnegative");
  }
}

Vec step_rk4(const PhaseSystem& system, const Vec& z, double dt) {
  const Vec k1 = system.rhs(z);
  const Vec k2 = system.rhs(z + 0.5 * dt * k1);
  const Vec k3 = system.rhs(z + 0.5 * dt * k2);
  const Vec k4 = system.rhs(z + dt * k3);
  return z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

// Central-difference Jacobian of the vector field.
Mat jacobian(const PhaseSystem& system, const Vec& z) {
  const auto n = z.size();
  Mat J(n, n);
  Vec zp = z;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double h = 1e-7 * (1.0 + std::abs(z(k)));
    zp(k) = z(k) + h;
    const Vec fp = system.rhs(zp);
    zp(k) = z(k) - h;
    const Vec fm = system.rhs(zp);
    zp(k) = z(k);
    J.col(k) = (fp - fm) / (2.0 * h);
  }
  return J;
}

}  // namespace

MidpointResult step_implicit_midpoint(const PhaseSystem& system, const Vec& z, double dt,
                                      double tol, int max_iter) {
  // Newton on R(y) = y - z - dt f((z + y) / 2) from an explicit Euler
  // predictor. The accepted state is written as z + dt f(mid), so linear
  // invariants such as total momentum are not disturbed by the LU solve.
  const auto n = z.size();
  Vec next = z + dt * system.rhs(z);
  double update = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    const Vec mid = 0.5 * (z + next);
    const Vec f = system.rhs(mid);
    const Vec residual = next - z - dt * f;
    update = residual.lpNorm<Eigen::Infinity>();
    if (!residual.allFinite()) break;
    if (update <= tol * (1.0 + next.lpNorm<Eigen::Infinity>())) {
      return {z + dt * f, it};
    }
    const Mat A = Mat::Identity(n, n) - 0.5 * dt * jacobian(system, mid);
    next -= A.partialPivLu().solve(residual);
    if (!next.allFinite()) break;
  }
  std::ostringstream msg;
  msg << "implicit midpoint did not converge in " << max_iter << " iterations (last residual "
      << update << "); try a smaller dt";
  throw ConvergenceError(msg.str());
}

void check_collisions(const PhaseSystem& system, const Vec& z) {
  const auto cp = closest_pair(system.positions(z));
  if (cp.i >= 0 && cp.distance < 1e-8 * system.length_scale()) {
    std::ostringstream msg;
    msg << "particle collision: particles " << cp.i << " and " << cp.j << " at distance "
        << cp.distance;
    throw CollisionError(msg.str());
  }
}

double particle_monitor(const PhaseSystem& system, const Vec& z) {
  return constraint_force_monitor(system.field(z), rows_of(system.positions(z)));
}

Trajectory integrate(const PhaseSystem& system, const Vec& initial, const IntegratorConfig& config,
                     const std::vector<Observer>& observers) {
  config.validate();
  if (initial.size() != system.size()) throw ConfigError("initial state does not match the system");
  Trajectory traj;
  auto store = [&](int step, double t, const Vec& z) {
    traj.snapshots.push_back({step, t, z});
    for (const auto& obs : observers) obs(system, traj.snapshots.back());
  };

  check_collisions(system, initial);
  store(0, 0.0, initial);
  const auto n_steps = static_cast<int>(std::llround(config.t_end / config.dt));
  Vec z = initial;
  for (int step = 1; step <= n_steps; ++step) {
    const double t = step * config.dt;
    try {
      if (config.method == IntegratorMethod::Rk4) {
        z = step_rk4(system, z, config.dt);
      } else {
        z = step_implicit_midpoint(system, z, config.dt, config.newton_tol, config.newton_max_iter).state;
      }
      check_collisions(system, z);
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "step " << step << " (t = " << t << "): " << e.what();
      if (dynamic_cast<const CollisionError*>(&e)) throw CollisionError(msg.str());
      if (dynamic_cast<const ConvergenceError*>(&e)) throw ConvergenceError(msg.str());
      throw Error(msg.str());
    }
    traj.steps = step;
    const bool triggered =
        config.stop_on_monitor && particle_monitor(system, z) > *config.stop_on_monitor;
    if (triggered || step % config.observer_stride == 0 || step == n_steps) store(step, t, z);
    if (triggered) {
      traj.status = RunStatus::MonitorTriggered;
      break;
    }
  }
  return traj;
}

}  // namespace jetflow
