#pragma once

#include <string>
#include <vector>

#include "jetflow/state.hpp"

namespace jetflow {

/// Regularized point vortices in the plane.
struct VortexState {
  PointArray positions;  // N x 2
  Vec strengths;         // circulations Gamma_i
  double blob_width = 0.1;

  int count() const { return static_cast<int>(positions.rows()); }
  void validate() const;
};

/// Gaussian-blob (Krasny) Biot-Savart kernel
///   K(r) = r_perp / (2 pi |r|^2) * (1 - exp(-|r|^2 / delta^2)),
/// with the removable singularity K(0) = 0.
Vec blob_kernel(const Vec& r, double delta);
/// d_c K^a(r).
Mat blob_kernel_grad(const Vec& r, double delta);

Vec blob_velocity(const VortexState& state, const Vec& query);
Mat blob_velocity_grad(const VortexState& state, const Vec& query);

/// Velocities of all blobs (self-induction vanishes).
PointArray blob_eom(const VortexState& state);

/// Trace of the Jacobian of blob_eom; zero for a Hamiltonian vortex system.
double blob_jacobian_trace(const VortexState& state);

struct BlobInvariants {
  double total_circulation;
  Vec linear_impulse;
  double angular_impulse;
};

BlobInvariants blob_invariants(const VortexState& state);

/// Interaction energy -sum_{i<j} Gamma_i Gamma_j psi(|x_i - x_j|^2) with the
/// blob stream function psi(s) = (ln s + E1(s / delta^2)) / (4 pi).
double blob_energy(const VortexState& state);

}  // namespace jetflow
