#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "jetflow/dynamics.hpp"
#include "jetflow/errors.hpp"

namespace jetflow {

/// Translational momentum map: sum_i p_i.
Vec noether_linear(const ParticleState& state);
Vec noether_linear(const JetParticleState& state);

/// Rotational momentum map as bivector components: one entry in 2D
/// (sum x ^ p), three in 3D (sum x cross p), none in 1D. For jets the
/// frame contribution is the antisymmetric part of sum_i mu_i, so the
/// quantity is the momentum map of x -> Rx, D -> RD.
Vec noether_angular(const ParticleState& state);
Vec noether_angular(const JetParticleState& state);

/// D_i^T P_i, conserved by the right action on the frame of particle i.
Mat noether_jet(const JetParticleState& state, int i);

/// Trapezoidal rule for the line integral of u around the circle of
/// radius `radius` centred at `center` (counter-clockwise).
template <class Field>
double circulation(const Field& field, const Vec& center, double radius, int n_quad = 64) {
  if (center.size() != 2) throw ConstraintError("circulation is only defined in 2D");
  if (!(radius > 0.0)) throw DomainError("circulation radius must be positive");
  if (n_quad < 16) throw DomainError("circulation needs at least 16 quadrature nodes");
  double sum = 0.0;
  Vec m(2), tangent(2);
  for (int k = 0; k < n_quad; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n_quad;
    m << center(0) + radius * std::cos(theta), center(1) + radius * std::sin(theta);
    tangent << -std::sin(theta), std::cos(theta);
    const Vec u = field(m);
    sum += u.dot(tangent);
  }
  return sum * radius * 2.0 * std::numbers::pi / n_quad;
}

struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;
  Vec linear_momentum;
  Vec angular_momentum;
  MatList jet_momenta;
  std::vector<double> circulations;
  double monitor = 0.0;
};

struct RecordOptions {
  /// Circulation radius as a multiple of the system length scale.
  double circulation_radius = 0.01;
  int circulation_nodes = 64;
};

/// All diagnostics of a phase-space state. Pure: equal inputs give
/// bit-identical records.
DiagnosticsRecord record(const PhaseSystem& system, const Vec& z, double t,
                         const RecordOptions& options = {});

}  // namespace jetflow
