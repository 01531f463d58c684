#pragma once

#include <utility>

#include "jetflow/kernel.hpp"
#include "jetflow/state.hpp"

namespace jetflow {

/// Condition-number estimate above which a Gram solve is refused.
inline constexpr double kGramConditionLimit = 1e12;

struct InterpOptions {
  /// Tikhonov term added to the Gram diagonal. Zero keeps interpolation exact.
  double jitter = 0.0;
  /// Restrict frame rates to traceless matrices (SL(d) frames).
  bool incompressible = false;
};

/// Second spatial derivatives: hessian[a](c, e) = d_c d_e u^a.
using Hessian = std::vector<Mat>;

// ---- zeroth order -------------------------------------------------------

/// N x N matrix phi(|x_i - x_j|^2).
Mat gram_k0(const RadialKernel& kernel, const PointArray& positions);

/// Momenta p with K(x) p = velocities, so u(m) = sum_j phi(|m - x_j|^2) p_j
/// reproduces the velocities at the particles.
PointArray solve_k0(const RadialKernel& kernel, const PointArray& positions,
                    const PointArray& velocities, const InterpOptions& options = {});

Vec eval_field_k0(const RadialKernel& kernel, const PointArray& positions,
                  const PointArray& momenta, const Vec& query);

/// grad(a, b) = d_b u^a.
Mat eval_grad_k0(const RadialKernel& kernel, const PointArray& positions,
                 const PointArray& momenta, const Vec& query);

// ---- first order (jets) -------------------------------------------------
//
// u^a(m) = sum_j phi(s_j) p_j^a + mu_j^{ab} d/dx_j^b phi(s_j),  s_j = |m - x_j|^2
//
// The second term is the Riesz representer of v -> mu_j : Dv(x_j), so the
// block Gram below is symmetric positive definite for distinct particles.

struct JetMomenta {
  PointArray momenta;
  MatList frame_momenta;
};

struct JetVelocities {
  PointArray velocities;
  MatList frame_rates;
};

/// Block Gram of size N(d + d^2); per particle the unknowns are ordered as
/// p (d entries) followed by mu in row-major order.
Mat gram_k1(const RadialKernel& kernel, const PointArray& positions);

JetMomenta solve_k1(const RadialKernel& kernel, const PointArray& positions,
                    const PointArray& velocities, const MatList& frame_rates,
                    const InterpOptions& options = {});

Vec eval_field_k1(const RadialKernel& kernel, const PointArray& positions,
                  const PointArray& momenta, const MatList& frame_momenta, const Vec& query);

Mat eval_grad_k1(const RadialKernel& kernel, const PointArray& positions,
                 const PointArray& momenta, const MatList& frame_momenta, const Vec& query);

Hessian eval_hessian_k1(const RadialKernel& kernel, const PointArray& positions,
                        const PointArray& momenta, const MatList& frame_momenta,
                        const Vec& query);

/// Forward Gram application: field value and gradient at every particle.
JetVelocities apply_gram_k1(const RadialKernel& kernel, const PointArray& positions,
                            const PointArray& momenta, const MatList& frame_momenta);

/// Throws RegularityError unless the kernel supports first-order jets.
void require_jet_kernel(const RadialKernel& kernel);

}  // namespace jetflow
