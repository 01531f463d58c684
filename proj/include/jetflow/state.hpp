#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace jetflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
/// N x d array, one particle per row.
using PointArray = Eigen::MatrixXd;
using MatList = std::vector<Eigen::MatrixXd>;

/// Point of T*X for landmark (zeroth-order) particles.
struct ParticleState {
  PointArray positions;
  PointArray momenta;

  int dim() const { return static_cast<int>(positions.cols()); }
  int count() const { return static_cast<int>(positions.rows()); }

  /// Throws ConstraintError on shape mismatch, non-finite entries, d outside
  /// {1,2,3}, or coincident particles.
  void validate() const;
};

/// Point of T*X^(1): positions, frames D_i, linear momenta p_i and the
/// spatial frame momenta mu_i (paired with nu_i = dD_i/dt D_i^{-1}).
struct JetParticleState {
  PointArray positions;
  MatList frames;
  PointArray momenta;
  MatList frame_momenta;
  bool incompressible = false;

  int dim() const { return static_cast<int>(positions.cols()); }
  int count() const { return static_cast<int>(positions.rows()); }

  /// Canonical frame covector P_i = mu_i D_i^{-T}.
  Mat frame_covector(int i) const;

  void validate() const;

  /// Identity frames, zero momenta.
  static JetParticleState at_rest(const PointArray& positions, bool incompressible = false);
};

/// Smallest pairwise distance and the pair that attains it.
struct ClosestPair {
  double distance;
  int i;
  int j;
};

ClosestPair closest_pair(const PointArray& positions);

/// 2D rotation generator [[0,-1],[1,0]].
Mat spin_generator();

}  // namespace jetflow
