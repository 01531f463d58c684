#include "jetflow/interp.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "jetflow/errors.hpp"

namespace jetflow {

namespace {

void check_query(const PointArray& positions, const Vec& query) {
  if (query.size() != positions.cols()) {
    throw ConstraintError("query dimension does not match particle dimension");
  }
}

[[noreturn]] void throw_near_coincident(const PointArray& positions, double condition) {
  const auto cp = closest_pair(positions);
  std::ostringstream msg;
  msg << "near-coincident particles: Gram condition estimate " << condition;
  if (cp.i >= 0) {
    msg << " (closest pair " << cp.i << ", " << cp.j << " at distance " << cp.distance << ")";
  }
  throw ConditioningError(msg.str());
}

// Factorizes an SPD Gram with optional diagonal jitter and solves for every
// column of rhs.
Mat solve_spd(Mat gram, const Mat& rhs, double jitter, const PointArray& positions) {
  if (jitter < 0.0) throw DomainError("Gram jitter must be nonnegative");
  gram.diagonal().array() += jitter;
  Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success) throw_near_coincident(positions, INFINITY);
  const double rcond = llt.rcond();
  if (!(rcond > 0.0) || 1.0 / rcond > kGramConditionLimit) {
    throw_near_coincident(positions, rcond > 0.0 ? 1.0 / rcond : INFINITY);
  }
  return llt.solve(rhs);
}

}  // namespace

void require_jet_kernel(const RadialKernel& kernel) {
  if (!kernel.smooth_at_origin()) {
    throw RegularityError("insufficient kernel regularity for k=1 (" + kernel.name() + ")");
  }
}

Mat gram_k0(const RadialKernel& kernel, const PointArray& positions) {
  const auto n = positions.rows();
  Mat K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    K(i, i) = kernel.eval(0.0);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      K(i, j) = K(j, i) = kernel.eval((positions.row(i) - positions.row(j)).squaredNorm());
    }
  }
  return K;
}

PointArray solve_k0(const RadialKernel& kernel, const PointArray& positions,
                    const PointArray& velocities, const InterpOptions& options) {
  ParticleState{positions, velocities}.validate();
  return solve_spd(gram_k0(kernel, positions), velocities, options.jitter, positions);
}

Vec eval_field_k0(const RadialKernel& kernel, const PointArray& positions,
                  const PointArray& momenta, const Vec& query) {
  check_query(positions, query);
  Vec u = Vec::Zero(query.size());
  for (Eigen::Index j = 0; j < positions.rows(); ++j) {
    const double s = (query - positions.row(j).transpose()).squaredNorm();
    u += kernel.eval(s) * momenta.row(j).transpose();
  }
  return u;
}

Mat eval_grad_k0(const RadialKernel& kernel, const PointArray& positions,
                 const PointArray& momenta, const Vec& query) {
  check_query(positions, query);
  const auto d = query.size();
  Mat G = Mat::Zero(d, d);
  for (Eigen::Index j = 0; j < positions.rows(); ++j) {
    const Vec r = query - positions.row(j).transpose();
    G += 2.0 * kernel.d1(r.squaredNorm()) * momenta.row(j).transpose() * r.transpose();
  }
  return G;
}

Mat gram_k1(const RadialKernel& kernel, const PointArray& positions) {
  require_jet_kernel(kernel);
  const auto n = positions.rows();
  const auto d = positions.cols();
  const auto B = d + d * d;
  Mat G = Mat::Zero(n * B, n * B);
  // Row block i holds (xdot_i, nu_i), column block j holds (p_j, mu_j).
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vec r = (positions.row(i) - positions.row(j)).transpose();
      const double s = r.squaredNorm();
      const double f0 = kernel.eval(s);
      const double f1 = kernel.d1(s);
      const double f2 = kernel.d2(s);
      const auto ri = i * B;
      const auto cj = j * B;
      for (Eigen::Index a = 0; a < d; ++a) {
        G(ri + a, cj + a) = f0;
        for (Eigen::Index b = 0; b < d; ++b) {
          // xdot_i^a <- mu_j^{ab}
          G(ri + a, cj + d + a * d + b) = -2.0 * f1 * r(b);
          // nu_i^{ab} <- p_j^a
          G(ri + d + a * d + b, cj + a) = 2.0 * f1 * r(b);
          // nu_i^{ac} <- mu_j^{ab}
          for (Eigen::Index c = 0; c < d; ++c) {
            G(ri + d + a * d + c, cj + d + a * d + b) =
                -2.0 * f1 * (b == c ? 1.0 : 0.0) - 4.0 * f2 * r(b) * r(c);
          }
        }
      }
    }
  }
  return G;
}

JetMomenta solve_k1(const RadialKernel& kernel, const PointArray& positions,
                    const PointArray& velocities, const MatList& frame_rates,
                    const InterpOptions& options) {
  require_jet_kernel(kernel);
  ParticleState{positions, velocities}.validate();
  const auto n = positions.rows();
  const auto d = positions.cols();
  const auto B = d + d * d;
  if (static_cast<Eigen::Index>(frame_rates.size()) != n) {
    throw ConstraintError("need one frame rate per particle");
  }
  Vec rhs(n * B);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Mat& nu = frame_rates[i];
    if (nu.rows() != d || nu.cols() != d || !nu.allFinite()) {
      throw ConstraintError("frame rate of particle " + std::to_string(i) + " is not a finite d x d matrix");
    }
    if (options.incompressible && std::abs(nu.trace()) > 1e-12 * (1.0 + nu.norm())) {
      throw ConstraintError("constraint violation: frame rate of particle " + std::to_string(i) +
                            " has nonzero trace in incompressible mode");
    }
    rhs.segment(i * B, d) = velocities.row(i).transpose();
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index c = 0; c < d; ++c) rhs(i * B + d + a * d + c) = nu(a, c);
    }
  }
  const Vec sol = solve_spd(gram_k1(kernel, positions), rhs, options.jitter, positions);
  JetMomenta out{PointArray(n, d), MatList(n, Mat(d, d))};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.momenta.row(i) = sol.segment(i * B, d).transpose();
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index c = 0; c < d; ++c) out.frame_momenta[i](a, c) = sol(i * B + d + a * d + c);
    }
  }
  return out;
}

Vec eval_field_k1(const RadialKernel& kernel, const PointArray& positions,
                  const PointArray& momenta, const MatList& frame_momenta, const Vec& query) {
  require_jet_kernel(kernel);
  check_query(positions, query);
  Vec u = Vec::Zero(query.size());
  for (Eigen::Index j = 0; j < positions.rows(); ++j) {
    const Vec r = query - positions.row(j).transpose();
    const double s = r.squaredNorm();
    u += kernel.eval(s) * momenta.row(j).transpose() - 2.0 * kernel.d1(s) * (frame_momenta[j] * r);
  }
  return u;
}

Mat eval_grad_k1(const RadialKernel& kernel, const PointArray& positions,
                 const PointArray& momenta, const MatList& frame_momenta, const Vec& query) {
  require_jet_kernel(kernel);
  check_query(positions, query);
  const auto d = query.size();
  Mat G = Mat::Zero(d, d);
  for (Eigen::Index j = 0; j < positions.rows(); ++j) {
    const Vec r = query - positions.row(j).transpose();
    const double s = r.squaredNorm();
    const double f1 = kernel.d1(s);
    const double f2 = kernel.d2(s);
    const Mat& mu = frame_momenta[j];
    G += 2.0 * f1 * momenta.row(j).transpose() * r.transpose() - 2.0 * f1 * mu -
         4.0 * f2 * (mu * r) * r.transpose();
  }
  return G;
}

Hessian eval_hessian_k1(const RadialKernel& kernel, const PointArray& positions,
                        const PointArray& momenta, const MatList& frame_momenta,
                        const Vec& query) {
  require_jet_kernel(kernel);
  check_query(positions, query);
  const auto d = query.size();
  Hessian H(d, Mat::Zero(d, d));
  for (Eigen::Index j = 0; j < positions.rows(); ++j) {
    const Vec r = query - positions.row(j).transpose();
    const double s = r.squaredNorm();
    const double f1 = kernel.d1(s);
    const double f2 = kernel.d2(s);
    const double f3 = kernel.d3(s);
    const Mat& mu = frame_momenta[j];
    const Vec mur = mu * r;
    const Mat rr = r * r.transpose();
    const Mat I = Mat::Identity(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
      const double pa = momenta(j, a);
      const Vec mu_row = mu.row(a).transpose();
      H[a] += (4.0 * f2 * pa - 8.0 * f3 * mur(a)) * rr + (2.0 * f1 * pa - 4.0 * f2 * mur(a)) * I -
              4.0 * f2 * (mu_row * r.transpose() + r * mu_row.transpose());
    }
  }
  return H;
}

JetVelocities apply_gram_k1(const RadialKernel& kernel, const PointArray& positions,
                            const PointArray& momenta, const MatList& frame_momenta) {
  const auto n = positions.rows();
  JetVelocities out{PointArray(n, positions.cols()), MatList(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec xi = positions.row(i).transpose();
    out.velocities.row(i) = eval_field_k1(kernel, positions, momenta, frame_momenta, xi).transpose();
    out.frame_rates[i] = eval_grad_k1(kernel, positions, momenta, frame_momenta, xi);
  }
  return out;
}

}  // namespace jetflow
