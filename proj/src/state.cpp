#include "jetflow/state.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "jetflow/errors.hpp"

namespace jetflow {

ClosestPair closest_pair(const PointArray& positions) {
  ClosestPair best{std::numeric_limits<double>::infinity(), -1, -1};
  for (Eigen::Index i = 0; i < positions.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < positions.rows(); ++j) {
      const double d = (positions.row(i) - positions.row(j)).norm();
      if (d < best.distance) best = {d, static_cast<int>(i), static_cast<int>(j)};
    }
  }
  return best;
}

Mat spin_generator() {
  Mat J(2, 2);
  J << 0.0, -1.0, 1.0, 0.0;
  return J;
}

namespace {

void check_positions(const PointArray& positions) {
  if (positions.rows() < 1) throw ConstraintError("state needs at least one particle");
  if (positions.cols() < 1 || positions.cols() > 3) {
    throw ConstraintError("dimension must be 1, 2 or 3");
  }
  if (!positions.allFinite()) throw ConstraintError("non-finite particle position");
  const auto cp = closest_pair(positions);
  if (cp.i >= 0 && !(cp.distance > 0.0)) {
    throw ConstraintError("particles " + std::to_string(cp.i) + " and " + std::to_string(cp.j) +
                          " coincide");
  }
}

}  // namespace

void ParticleState::validate() const {
  check_positions(positions);
  if (momenta.rows() != positions.rows() || momenta.cols() != positions.cols()) {
    throw ConstraintError("momenta shape does not match positions");
  }
  if (!momenta.allFinite()) throw ConstraintError("non-finite momentum");
}

Mat JetParticleState::frame_covector(int i) const {
  // P = mu D^{-T}  <=>  P D^T = mu  <=>  D P^T = mu^T
  return frames[i].partialPivLu().solve(frame_momenta[i].transpose()).transpose();
}

void JetParticleState::validate() const {
  check_positions(positions);
  const auto n = static_cast<std::size_t>(count());
  const int d = dim();
  if (momenta.rows() != positions.rows() || momenta.cols() != positions.cols()) {
    throw ConstraintError("momenta shape does not match positions");
  }
  if (frames.size() != n || frame_momenta.size() != n) {
    throw ConstraintError("need one frame and one frame momentum per particle");
  }
  if (!momenta.allFinite()) throw ConstraintError("non-finite momentum");
  for (std::size_t i = 0; i < n; ++i) {
    const Mat& D = frames[i];
    const Mat& mu = frame_momenta[i];
    if (D.rows() != d || D.cols() != d || mu.rows() != d || mu.cols() != d) {
      throw ConstraintError("frame data of particle " + std::to_string(i) + " is not d x d");
    }
    if (!D.allFinite() || !mu.allFinite()) {
      throw ConstraintError("non-finite frame data at particle " + std::to_string(i));
    }
    const double det = D.determinant();
    if (det == 0.0) throw ConstraintError("singular frame at particle " + std::to_string(i));
    if (incompressible) {
      if (std::abs(det - 1.0) > 1e-9) {
        throw ConstraintError("incompressible frame at particle " + std::to_string(i) +
                              " has det != 1");
      }
      if (std::abs(mu.trace()) > 1e-9 * (1.0 + mu.norm())) {
        throw ConstraintError("incompressible frame momentum at particle " + std::to_string(i) +
                              " is not traceless");
      }
    }
  }
}

JetParticleState JetParticleState::at_rest(const PointArray& positions, bool incompressible) {
  JetParticleState s;
  const auto n = positions.rows();
  const auto d = positions.cols();
  s.positions = positions;
  s.momenta = PointArray::Zero(n, d);
  s.frames.assign(n, Mat::Identity(d, d));
  s.frame_momenta.assign(n, Mat::Zero(d, d));
  s.incompressible = incompressible;
  return s;
}

}  // namespace jetflow
