#pragma once

#include <memory>
#include <string>
#include <vector>

#include "jetflow/field.hpp"
#include "jetflow/interp.hpp"
#include "jetflow/spectral.hpp"

namespace jetflow {

// ---- reduced Hamiltonians and canonical equations -----------------------

/// H = 1/2 sum_ij phi(|x_i - x_j|^2) p_i . p_j
double hamiltonian_k0(const RadialKernel& kernel, const ParticleState& state);

struct LandmarkRates {
  PointArray positions;
  PointArray momenta;
};

/// xdot_i = sum_j phi(s_ij) p_j,  pdot_i = -sum_j 2 phi'(s_ij) (x_i - x_j) (p_i . p_j).
LandmarkRates eom_k0(const RadialKernel& kernel, const ParticleState& state);

/// Jet Hamiltonian 1/2 (p, mu)^T G(x) (p, mu), summed pairwise.
double hamiltonian_k1(const RadialKernel& kernel, const JetParticleState& state);

struct JetRates {
  PointArray positions;   // xdot_i = u(x_i)
  MatList frames;         // Ddot_i = nu_i D_i
  PointArray momenta;     // pdot_i = -dH/dx_i
  MatList frame_momenta;  // mudot_i = mu_i nu_i^T - nu_i^T mu_i
  MatList frame_covectors;  // Pdot_i = -nu_i^T P_i
  MatList frame_rates;    // nu_i = Du(x_i) (traceless part when incompressible)
};

JetRates eom_k1(const RadialKernel& kernel, const JetParticleState& state);

// ---- diagnostics --------------------------------------------------------

struct CurvatureOptions {
  /// Base displacement of the central differences, in units of the kernel
  /// length scale.
  double relative_step = 1e-5;
};

/// Reduced curvature B(xdot, xdelta) evaluated at query: the exterior
/// derivative of the interpolation one-form (central differences of the
/// Gram solve along the base directions) plus the Jacobi-Lie bracket
/// D I(xdelta) I(xdot) - D I(xdot) I(xdelta). With this sign the value
/// vanishes at every particle.
Vec curvature_value(const RadialKernel& kernel, const PointArray& positions, const PointArray& xdot,
                    const PointArray& xdelta, const Vec& query, const CurvatureOptions& options = {});

/// max over samples of |(u . grad) u|.
double constraint_force_monitor(const VelocityFieldView& field, const std::vector<Vec>& samples);
double constraint_force_monitor(const RadialKernel& kernel, const ParticleState& state,
                                const std::vector<Vec>& samples);
double constraint_force_monitor(const RadialKernel& kernel, const JetParticleState& state,
                                const std::vector<Vec>& samples);

std::vector<Vec> rows_of(const PointArray& points);

// ---- flat phase-space systems used by the integrators -------------------

/// First-order ODE z' = f(z) on a flat phase vector.
class PhaseSystem {
 public:
  virtual ~PhaseSystem() = default;

  virtual std::string method() const = 0;
  virtual Eigen::Index size() const = 0;
  virtual Vec rhs(const Vec& z) const = 0;
  /// Conserved energy of the flow.
  virtual double energy(const Vec& z) const = 0;
  virtual PointArray positions(const Vec& z) const = 0;
  /// Collision threshold is 1e-8 times this length.
  virtual double length_scale() const = 0;
  virtual VelocityFieldView field(const Vec& z) const = 0;
};

/// Which slots of the phase vector hold which data.
struct PhaseLayout {
  int count;
  int dim;
  bool has_frames;

  Eigen::Index positions_offset() const { return 0; }
  Eigen::Index frames_offset() const { return count * dim; }
  Eigen::Index momenta_offset() const { return count * dim * (has_frames ? 1 + dim : 1); }
  Eigen::Index covectors_offset() const { return momenta_offset() + count * dim; }
  Eigen::Index size() const { return 2 * count * dim * (has_frames ? 1 + dim : 1); }
};

/// Canonical landmark system on T*X (order 0).
class LandmarkSystem : public PhaseSystem {
 public:
  LandmarkSystem(RadialKernel kernel, int count, int dim);

  std::string method() const override { return "landmark_k0"; }
  Eigen::Index size() const override { return layout_.size(); }
  Vec rhs(const Vec& z) const override;
  double energy(const Vec& z) const override;
  PointArray positions(const Vec& z) const override;
  double length_scale() const override { return kernel_.length_scale(); }
  VelocityFieldView field(const Vec& z) const override;

  const RadialKernel& kernel() const { return kernel_; }
  const PhaseLayout& layout() const { return layout_; }
  Vec pack(const ParticleState& state) const;
  ParticleState unpack(const Vec& z) const;

 private:
  RadialKernel kernel_;
  PhaseLayout layout_;
};

/// Canonical jet system on T*X^(1) in the variables (x, D, p, P), with the
/// spatial frame momentum mu = P D^T.
class JetSystem : public PhaseSystem {
 public:
  JetSystem(RadialKernel kernel, int count, int dim, bool incompressible = false);

  std::string method() const override { return "jet_k1"; }
  Eigen::Index size() const override { return layout_.size(); }
  Vec rhs(const Vec& z) const override;
  double energy(const Vec& z) const override;
  PointArray positions(const Vec& z) const override;
  double length_scale() const override { return kernel_.length_scale(); }
  VelocityFieldView field(const Vec& z) const override;

  const RadialKernel& kernel() const { return kernel_; }
  const PhaseLayout& layout() const { return layout_; }
  bool incompressible() const { return incompressible_; }
  Vec pack(const JetParticleState& state) const;
  JetParticleState unpack(const Vec& z) const;
  /// D_i^T P_i read straight from the canonical slots.
  MatList jet_momenta(const Vec& z) const;

 private:
  RadialKernel kernel_;
  PhaseLayout layout_;
  bool incompressible_;
};

/// Particles driven by the position-independent divergence-free spectral
/// interpolation. The metric is the Euclidean norm of the minimum-norm
/// coefficients, so H = |A(x)^T p|^2 / 2, xdot_i = u(x_i) and
/// pdot_i = -Du(x_i)^T p_i.
class SpectralSystem : public PhaseSystem {
 public:
  SpectralSystem(std::shared_ptr<const SpectralBasis> basis, int count);

  std::string method() const override { return "spectral_k0"; }
  Eigen::Index size() const override { return layout_.size(); }
  Vec rhs(const Vec& z) const override;
  double energy(const Vec& z) const override;
  PointArray positions(const Vec& z) const override;
  double length_scale() const override { return basis_->box_length(); }
  VelocityFieldView field(const Vec& z) const override;

  const SpectralBasis& basis() const { return *basis_; }
  Vec pack(const ParticleState& state) const;
  ParticleState unpack(const Vec& z) const;

 private:
  std::shared_ptr<const SpectralBasis> basis_;
  PhaseLayout layout_;
};

/// Blob positions advected by blob_eom; strengths and width are parameters.
class VortexSystem : public PhaseSystem {
 public:
  VortexSystem(Vec strengths, double blob_width);

  std::string method() const override { return "vortex_blob"; }
  Eigen::Index size() const override { return 2 * strengths_.size(); }
  Vec rhs(const Vec& z) const override;
  double energy(const Vec& z) const override;
  PointArray positions(const Vec& z) const override;
  double length_scale() const override { return blob_width_; }
  VelocityFieldView field(const Vec& z) const override;

  const Vec& strengths() const { return strengths_; }
  double blob_width() const { return blob_width_; }
  Vec pack(const VortexState& state) const;
  VortexState unpack(const Vec& z) const;

 private:
  Vec strengths_;
  double blob_width_;
};

}  // namespace jetflow
