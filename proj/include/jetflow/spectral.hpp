#pragma once

#include <vector>

#include "jetflow/state.hpp"

namespace jetflow {

/// Divergence-free Fourier basis on the periodic square [0, L)^2.
///
/// For every integer wave vector kappa with 0 < |kappa| <= cutoff (one
/// representative of each +/- pair) there are two fields
///   w(m) = kappa_perp / |kappa| * cos(2 pi kappa.m / L)   and   ... sin(...),
/// plus the two uniform fields e_x / sqrt(2), e_y / sqrt(2). All basis
/// fields have the same L^2 norm (L^2 / 2), so the Euclidean norm of the
/// coefficient vector is proportional to the kinetic energy of the field.
class SpectralBasis {
 public:
  enum class Kind { UniformX, UniformY, Cos, Sin };
  struct Mode {
    Kind kind;
    int kx;
    int ky;
  };

  SpectralBasis(double box_length, int cutoff);

  double box_length() const { return box_length_; }
  int cutoff() const { return cutoff_; }
  int size() const { return static_cast<int>(modes_.size()); }
  const std::vector<Mode>& modes() const { return modes_; }

  Vec basis_field(int index, const Vec& m) const;
  Mat basis_grad(int index, const Vec& m) const;

  /// (2N) x size() matrix; row 2k + a holds component a of every basis
  /// field at particle k.
  Mat matching_matrix(const PointArray& positions) const;

  Vec eval(const Vec& coefficients, const Vec& m) const;
  Mat eval_grad(const Vec& coefficients, const Vec& m) const;

 private:
  double box_length_;
  int cutoff_;
  std::vector<Mode> modes_;
};

/// Minimum-norm coefficients c with sum_i c_i u_i(x_k) = velocities_k.
Vec solve_spectral(const SpectralBasis& basis, const PointArray& positions,
                   const PointArray& velocities);

/// Particle momenta p with (A A^T) p = velocities, A the matching matrix.
/// The minimum-norm coefficients are then A^T p.
PointArray spectral_momenta(const SpectralBasis& basis, const PointArray& positions,
                            const PointArray& velocities);

/// Coefficients A^T p of the field generated by particle momenta.
Vec spectral_coefficients(const SpectralBasis& basis, const PointArray& positions,
                          const PointArray& momenta);

}  // namespace jetflow
