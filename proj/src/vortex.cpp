#include "jetflow/vortex.hpp"

#include <cmath>
#include <numbers>

#include "jetflow/errors.hpp"

namespace jetflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// f(x) = (1 - e^{-x}) / x and its derivative, stable near x = 0.
double smoothing(double x) {
  if (x < 1e-8) return 1.0 - 0.5 * x;
  return -std::expm1(-x) / x;
}

double smoothing_d1(double x) {
  if (x < 1e-2) return -0.5 + x / 3.0 - x * x / 8.0 + x * x * x / 30.0 - x * x * x * x / 144.0;
  return (std::exp(-x) * (1.0 + x) - 1.0) / (x * x);
}

// ln s + E1(s / delta^2), regular at s = 0.
double stream_core(double s, double delta) {
  const double x = s / (delta * delta);
  if (x < 1.0) {
    double sum = 0.0;
    double term = 1.0;
    for (int n = 1; n < 40; ++n) {
      term *= -x / n;
      sum -= term / n;
    }
    return 2.0 * std::log(delta) - std::numbers::egamma + sum;
  }
  return std::log(s) - std::expint(-x);
}

}  // namespace

void VortexState::validate() const {
  if (positions.cols() != 2) throw ConstraintError("vortex blobs live in the plane");
  if (strengths.size() != positions.rows()) {
    throw ConstraintError("need one strength per vortex");
  }
  if (!(blob_width > 0.0)) throw ConstraintError("blob width must be positive");
  if (!positions.allFinite() || !strengths.allFinite()) {
    throw ConstraintError("non-finite vortex data");
  }
  const auto cp = closest_pair(positions);
  if (cp.i >= 0 && !(cp.distance > 0.0)) {
    throw ConstraintError("vortices " + std::to_string(cp.i) + " and " + std::to_string(cp.j) +
                          " coincide");
  }
}

Vec blob_kernel(const Vec& r, double delta) {
  const double s = r.squaredNorm();
  const double g = smoothing(s / (delta * delta)) / (kTwoPi * delta * delta);
  Vec k(2);
  k << -r(1) * g, r(0) * g;
  return k;
}

Mat blob_kernel_grad(const Vec& r, double delta) {
  const double d2 = delta * delta;
  const double s = r.squaredNorm();
  const double g = smoothing(s / d2) / (kTwoPi * d2);
  const double dg = smoothing_d1(s / d2) / (kTwoPi * d2 * d2);
  Mat J(2, 2);
  J << 0.0, -1.0, 1.0, 0.0;
  return g * J + 2.0 * dg * (J * r) * r.transpose();
}

Vec blob_velocity(const VortexState& state, const Vec& query) {
  Vec u = Vec::Zero(2);
  for (int j = 0; j < state.count(); ++j) {
    u += state.strengths(j) * blob_kernel(query - state.positions.row(j).transpose(), state.blob_width);
  }
  return u;
}

Mat blob_velocity_grad(const VortexState& state, const Vec& query) {
  Mat G = Mat::Zero(2, 2);
  for (int j = 0; j < state.count(); ++j) {
    G += state.strengths(j) *
         blob_kernel_grad(query - state.positions.row(j).transpose(), state.blob_width);
  }
  return G;
}

PointArray blob_eom(const VortexState& state) {
  const int n = state.count();
  PointArray v = PointArray::Zero(n, 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Vec r = (state.positions.row(i) - state.positions.row(j)).transpose();
      v.row(i) += state.strengths(j) * blob_kernel(r, state.blob_width).transpose();
    }
  }
  return v;
}

double blob_jacobian_trace(const VortexState& state) {
  // d xdot_i / d x_i = sum_{j != i} Gamma_j DK(x_i - x_j); off-diagonal
  // blocks do not enter the trace.
  double trace = 0.0;
  const int n = state.count();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Vec r = (state.positions.row(i) - state.positions.row(j)).transpose();
      trace += state.strengths(j) * blob_kernel_grad(r, state.blob_width).trace();
    }
  }
  return trace;
}

BlobInvariants blob_invariants(const VortexState& state) {
  BlobInvariants inv{0.0, Vec::Zero(2), 0.0};
  for (int i = 0; i < state.count(); ++i) {
    const double g = state.strengths(i);
    inv.total_circulation += g;
    inv.linear_impulse += g * state.positions.row(i).transpose();
    inv.angular_impulse += g * state.positions.row(i).squaredNorm();
  }
  return inv;
}

double blob_energy(const VortexState& state) {
  double h = 0.0;
  for (int i = 0; i < state.count(); ++i) {
    for (int j = i + 1; j < state.count(); ++j) {
      const double s = (state.positions.row(i) - state.positions.row(j)).squaredNorm();
      h -= state.strengths(i) * state.strengths(j) * stream_core(s, state.blob_width);
    }
  }
  return h / (2.0 * kTwoPi);
}

}  // namespace jetflow
