#include "jetflow/spectral.hpp"

#include <cmath>
#include <numbers>

#include "jetflow/errors.hpp"

namespace jetflow {

namespace {

constexpr double kRankTolerance = 1e-10;

Vec flatten_rows(const PointArray& a) {
  Vec v(a.size());
  for (Eigen::Index k = 0; k < a.rows(); ++k) v.segment(k * a.cols(), a.cols()) = a.row(k).transpose();
  return v;
}

void check_planar(const PointArray& positions, const PointArray& velocities) {
  if (positions.cols() != 2) throw ConstraintError("spectral backend is two-dimensional");
  if (velocities.rows() != positions.rows() || velocities.cols() != 2) {
    throw ConstraintError("velocities shape does not match positions");
  }
  if (!positions.allFinite() || !velocities.allFinite()) {
    throw ConstraintError("non-finite spectral input");
  }
}

}  // namespace

SpectralBasis::SpectralBasis(double box_length, int cutoff) : box_length_(box_length), cutoff_(cutoff) {
  if (!(box_length > 0.0)) throw DomainError("spectral box length must be positive");
  if (cutoff < 0) throw DomainError("spectral cutoff must be nonnegative");
  modes_.push_back({Kind::UniformX, 0, 0});
  modes_.push_back({Kind::UniformY, 0, 0});
  for (int kx = 0; kx <= cutoff; ++kx) {
    for (int ky = -cutoff; ky <= cutoff; ++ky) {
      if (kx == 0 && ky <= 0) continue;
      if (kx * kx + ky * ky > cutoff * cutoff) continue;
      modes_.push_back({Kind::Cos, kx, ky});
      modes_.push_back({Kind::Sin, kx, ky});
    }
  }
}

Vec SpectralBasis::basis_field(int index, const Vec& m) const {
  const Mode& mode = modes_.at(index);
  Vec w = Vec::Zero(2);
  switch (mode.kind) {
    case Kind::UniformX:
      w(0) = std::numbers::sqrt2 / 2.0;
      return w;
    case Kind::UniformY:
      w(1) = std::numbers::sqrt2 / 2.0;
      return w;
    default:
      break;
  }
  const double scale = 2.0 * std::numbers::pi / box_length_;
  const double phase = scale * (mode.kx * m(0) + mode.ky * m(1));
  const double norm = std::hypot(mode.kx, mode.ky);
  const double amp = mode.kind == Kind::Cos ? std::cos(phase) : std::sin(phase);
  w << -mode.ky / norm * amp, mode.kx / norm * amp;
  return w;
}

Mat SpectralBasis::basis_grad(int index, const Vec& m) const {
  const Mode& mode = modes_.at(index);
  Mat G = Mat::Zero(2, 2);
  if (mode.kind == Kind::UniformX || mode.kind == Kind::UniformY) return G;
  const double scale = 2.0 * std::numbers::pi / box_length_;
  const double phase = scale * (mode.kx * m(0) + mode.ky * m(1));
  const double norm = std::hypot(mode.kx, mode.ky);
  const double damp = mode.kind == Kind::Cos ? -std::sin(phase) : std::cos(phase);
  Vec pol(2), k(2);
  pol << -mode.ky / norm, mode.kx / norm;
  k << scale * mode.kx, scale * mode.ky;
  G = damp * pol * k.transpose();
  return G;
}

Mat SpectralBasis::matching_matrix(const PointArray& positions) const {
  const auto n = positions.rows();
  Mat A(2 * n, size());
  for (Eigen::Index k = 0; k < n; ++k) {
    const Vec xk = positions.row(k).transpose();
    for (int i = 0; i < size(); ++i) A.block(2 * k, i, 2, 1) = basis_field(i, xk);
  }
  return A;
}

Vec SpectralBasis::eval(const Vec& coefficients, const Vec& m) const {
  Vec u = Vec::Zero(2);
  for (int i = 0; i < size(); ++i) u += coefficients(i) * basis_field(i, m);
  return u;
}

Mat SpectralBasis::eval_grad(const Vec& coefficients, const Vec& m) const {
  Mat G = Mat::Zero(2, 2);
  for (int i = 0; i < size(); ++i) G += coefficients(i) * basis_grad(i, m);
  return G;
}

Vec solve_spectral(const SpectralBasis& basis, const PointArray& positions,
                   const PointArray& velocities) {
  check_planar(positions, velocities);
  const Mat A = basis.matching_matrix(positions);
  if (A.rows() > A.cols()) {
    throw ConditioningError("degenerate particle/basis geometry: " + std::to_string(A.rows()) +
                            " matching conditions exceed " + std::to_string(A.cols()) +
                            " basis coefficients");
  }
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(A);
  cod.setThreshold(kRankTolerance);
  if (cod.rank() < A.rows()) {
    throw ConditioningError("degenerate particle/basis geometry: matching matrix rank " +
                            std::to_string(cod.rank()) + " < " + std::to_string(A.rows()));
  }
  return cod.solve(flatten_rows(velocities));
}

PointArray spectral_momenta(const SpectralBasis& basis, const PointArray& positions,
                            const PointArray& velocities) {
  check_planar(positions, velocities);
  const Mat A = basis.matching_matrix(positions);
  if (A.rows() > A.cols()) {
    throw ConditioningError("degenerate particle/basis geometry: too few basis fields");
  }
  const Mat gram = A * A.transpose();
  Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-12)) {
    throw ConditioningError("degenerate particle/basis geometry: singular matching Gram");
  }
  const Vec p = llt.solve(flatten_rows(velocities));
  PointArray out(positions.rows(), 2);
  for (Eigen::Index k = 0; k < positions.rows(); ++k) out.row(k) = p.segment(2 * k, 2).transpose();
  return out;
}

Vec spectral_coefficients(const SpectralBasis& basis, const PointArray& positions,
                          const PointArray& momenta) {
  return basis.matching_matrix(positions).transpose() * flatten_rows(momenta);
}

}  // namespace jetflow
