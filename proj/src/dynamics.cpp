#include "jetflow/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "jetflow/errors.hpp"

namespace jetflow {

namespace {

double frobenius(const Mat& a, const Mat& b) { return (a.array() * b.array()).sum(); }

Mat traceless(const Mat& m) {
  return m - (m.trace() / static_cast<double>(m.rows())) * Mat::Identity(m.rows(), m.cols());
}

}  // namespace

std::vector<Vec> rows_of(const PointArray& points) {
  std::vector<Vec> out;
  out.reserve(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) out.emplace_back(points.row(i).transpose());
  return out;
}

double hamiltonian_k0(const RadialKernel& kernel, const ParticleState& state) {
  const auto n = state.positions.rows();
  double h = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    h += 0.5 * kernel.eval(0.0) * state.momenta.row(i).squaredNorm();
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double s = (state.positions.row(i) - state.positions.row(j)).squaredNorm();
      h += kernel.eval(s) * state.momenta.row(i).dot(state.momenta.row(j));
    }
  }
  return h;
}

LandmarkRates eom_k0(const RadialKernel& kernel, const ParticleState& state) {
  const auto n = state.positions.rows();
  const auto d = state.positions.cols();
  LandmarkRates out{PointArray::Zero(n, d), PointArray::Zero(n, d)};
  const double phi0 = kernel.eval(0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.positions.row(i) += phi0 * state.momenta.row(i);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const auto r = (state.positions.row(i) - state.positions.row(j)).eval();
      const double s = r.squaredNorm();
      const double f0 = kernel.eval(s);
      out.positions.row(i) += f0 * state.momenta.row(j);
      out.positions.row(j) += f0 * state.momenta.row(i);
      const auto force = (2.0 * kernel.d1(s) * state.momenta.row(i).dot(state.momenta.row(j)) * r).eval();
      out.momenta.row(i) -= force;
      out.momenta.row(j) += force;
    }
  }
  return out;
}

// Pair term h_ij(r), r = x_i - x_j, of H = 1/2 sum_ij h_ij:
//   h = phi p_i.p_j - 2 phi' p_i.(mu_j r) + 2 phi' p_j.(mu_i r)
//       - 2 phi' mu_i:mu_j - 4 phi'' (mu_i r).(mu_j r)
double hamiltonian_k1(const RadialKernel& kernel, const JetParticleState& state) {
  require_jet_kernel(kernel);
  const auto n = state.positions.rows();
  double h = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec pi = state.momenta.row(i).transpose();
    const Mat& mi = state.frame_momenta[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vec pj = state.momenta.row(j).transpose();
      const Mat& mj = state.frame_momenta[j];
      const Vec r = (state.positions.row(i) - state.positions.row(j)).transpose();
      const double s = r.squaredNorm();
      const double f0 = kernel.eval(s);
      const double f1 = kernel.d1(s);
      const double f2 = kernel.d2(s);
      h += f0 * pi.dot(pj) - 2.0 * f1 * pi.dot(mj * r) + 2.0 * f1 * pj.dot(mi * r) -
           2.0 * f1 * frobenius(mi, mj) - 4.0 * f2 * (mi * r).dot(mj * r);
    }
  }
  return 0.5 * h;
}

JetRates eom_k1(const RadialKernel& kernel, const JetParticleState& state) {
  require_jet_kernel(kernel);
  const auto n = state.positions.rows();
  const auto d = state.positions.cols();
  const JetVelocities vel = apply_gram_k1(kernel, state.positions, state.momenta, state.frame_momenta);

  JetRates out;
  out.positions = vel.velocities;
  out.momenta = PointArray::Zero(n, d);
  out.frames.resize(n);
  out.frame_momenta.resize(n);
  out.frame_covectors.resize(n);
  out.frame_rates.resize(n);

  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec pi = state.momenta.row(i).transpose();
    const Mat& mi = state.frame_momenta[i];
    Vec grad = Vec::Zero(d);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;  // the self term has zero gradient in r
      const Vec pj = state.momenta.row(j).transpose();
      const Mat& mj = state.frame_momenta[j];
      const Vec r = (state.positions.row(i) - state.positions.row(j)).transpose();
      const double s = r.squaredNorm();
      const double f1 = kernel.d1(s);
      const double f2 = kernel.d2(s);
      const double f3 = kernel.d3(s);
      const Vec mir = mi * r;
      const Vec mjr = mj * r;
      grad += 2.0 * f1 * pi.dot(pj) * r;
      grad -= 2.0 * (2.0 * f2 * pi.dot(mjr) * r + f1 * mj.transpose() * pi);
      grad += 2.0 * (2.0 * f2 * pj.dot(mir) * r + f1 * mi.transpose() * pj);
      grad -= 4.0 * f2 * frobenius(mi, mj) * r;
      grad -= 4.0 * (2.0 * f3 * mir.dot(mjr) * r + f2 * (mi.transpose() * mjr + mj.transpose() * mir));
    }
    out.momenta.row(i) = -grad.transpose();

    const Mat nu = state.incompressible ? traceless(vel.frame_rates[i]) : vel.frame_rates[i];
    out.frame_rates[i] = nu;
    out.frames[i] = nu * state.frames[i];
    out.frame_momenta[i] = mi * nu.transpose() - nu.transpose() * mi;
    out.frame_covectors[i] = -nu.transpose() * state.frame_covector(static_cast<int>(i));
  }
  return out;
}

Vec curvature_value(const RadialKernel& kernel, const PointArray& positions, const PointArray& xdot,
                    const PointArray& xdelta, const Vec& query, const CurvatureOptions& options) {
  if (!kernel.smooth_at_origin()) {
    throw RegularityError("curvature requires a kernel that is smooth at the origin");
  }
  if (!(options.relative_step > 0.0)) throw DomainError("curvature step must be positive");
  const double base_step = options.relative_step * kernel.length_scale();

  auto field_at = [&](const PointArray& x, const PointArray& w) {
    return eval_field_k0(kernel, x, solve_k0(kernel, x, w), query);
  };
  // Directional derivative of x -> I(x, w)(query) along v.
  auto base_derivative = [&](const PointArray& v, const PointArray& w) -> Vec {
    const double scale = v.cwiseAbs().maxCoeff();
    if (scale == 0.0) return Vec::Zero(query.size());
    const double eps = base_step / scale;
    return (field_at(positions + eps * v, w) - field_at(positions - eps * v, w)) / (2.0 * eps);
  };

  const Vec d_form = base_derivative(xdot, xdelta) - base_derivative(xdelta, xdot);

  const PointArray p_dot = solve_k0(kernel, positions, xdot);
  const PointArray p_delta = solve_k0(kernel, positions, xdelta);
  const Vec u_dot = eval_field_k0(kernel, positions, p_dot, query);
  const Vec u_delta = eval_field_k0(kernel, positions, p_delta, query);
  const Vec bracket = eval_grad_k0(kernel, positions, p_delta, query) * u_dot -
                      eval_grad_k0(kernel, positions, p_dot, query) * u_delta;
  return d_form + bracket;
}

double constraint_force_monitor(const VelocityFieldView& field, const std::vector<Vec>& samples) {
  double worst = 0.0;
  for (const Vec& m : samples) {
    worst = std::max(worst, (field.grad(m) * field.eval(m)).norm());
  }
  return worst;
}

double constraint_force_monitor(const RadialKernel& kernel, const ParticleState& state,
                                const std::vector<Vec>& samples) {
  return constraint_force_monitor(
      VelocityFieldView::kernel_k0(kernel, state.positions, state.momenta), samples);
}

double constraint_force_monitor(const RadialKernel& kernel, const JetParticleState& state,
                                const std::vector<Vec>& samples) {
  return constraint_force_monitor(
      VelocityFieldView::kernel_k1(kernel, state.positions, state.momenta, state.frame_momenta),
      samples);
}

// ---- LandmarkSystem -----------------------------------------------------

namespace {

void write_points(Vec& z, Eigen::Index offset, const PointArray& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    z.segment(offset + i * a.cols(), a.cols()) = a.row(i).transpose();
  }
}

PointArray read_points(const Vec& z, Eigen::Index offset, int n, int d) {
  PointArray a(n, d);
  for (int i = 0; i < n; ++i) a.row(i) = z.segment(offset + i * d, d).transpose();
  return a;
}

void write_mats(Vec& z, Eigen::Index offset, const MatList& mats, int d) {
  for (std::size_t i = 0; i < mats.size(); ++i) {
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) z(offset + static_cast<Eigen::Index>(i) * d * d + a * d + b) = mats[i](a, b);
    }
  }
}

MatList read_mats(const Vec& z, Eigen::Index offset, int n, int d) {
  MatList out(n, Mat(d, d));
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) out[i](a, b) = z(offset + i * d * d + a * d + b);
    }
  }
  return out;
}

void check_shape(const PointArray& a, int n, int d, const char* what) {
  if (a.rows() != n || a.cols() != d) {
    throw ConstraintError(std::string(what) + " shape does not match the system layout");
  }
}

}  // namespace

LandmarkSystem::LandmarkSystem(RadialKernel kernel, int count, int dim)
    : kernel_(kernel), layout_{count, dim, false} {}

Vec LandmarkSystem::pack(const ParticleState& state) const {
  check_shape(state.positions, layout_.count, layout_.dim, "positions");
  check_shape(state.momenta, layout_.count, layout_.dim, "momenta");
  Vec z(size());
  write_points(z, layout_.positions_offset(), state.positions);
  write_points(z, layout_.momenta_offset(), state.momenta);
  return z;
}

ParticleState LandmarkSystem::unpack(const Vec& z) const {
  return {read_points(z, layout_.positions_offset(), layout_.count, layout_.dim),
          read_points(z, layout_.momenta_offset(), layout_.count, layout_.dim)};
}

Vec LandmarkSystem::rhs(const Vec& z) const {
  const auto rates = eom_k0(kernel_, unpack(z));
  Vec dz(size());
  write_points(dz, layout_.positions_offset(), rates.positions);
  write_points(dz, layout_.momenta_offset(), rates.momenta);
  return dz;
}

double LandmarkSystem::energy(const Vec& z) const { return hamiltonian_k0(kernel_, unpack(z)); }

PointArray LandmarkSystem::positions(const Vec& z) const {
  return read_points(z, layout_.positions_offset(), layout_.count, layout_.dim);
}

VelocityFieldView LandmarkSystem::field(const Vec& z) const {
  auto s = unpack(z);
  return VelocityFieldView::kernel_k0(kernel_, std::move(s.positions), std::move(s.momenta));
}

// ---- JetSystem ----------------------------------------------------------

JetSystem::JetSystem(RadialKernel kernel, int count, int dim, bool incompressible)
    : kernel_(kernel), layout_{count, dim, true}, incompressible_(incompressible) {
  require_jet_kernel(kernel_);
}

Vec JetSystem::pack(const JetParticleState& state) const {
  const int n = layout_.count;
  const int d = layout_.dim;
  check_shape(state.positions, n, d, "positions");
  check_shape(state.momenta, n, d, "momenta");
  if (static_cast<int>(state.frames.size()) != n || static_cast<int>(state.frame_momenta.size()) != n) {
    throw ConstraintError("frame data does not match the system layout");
  }
  MatList covectors(n);
  for (int i = 0; i < n; ++i) covectors[i] = state.frame_covector(i);
  Vec z(size());
  write_points(z, layout_.positions_offset(), state.positions);
  write_mats(z, layout_.frames_offset(), state.frames, d);
  write_points(z, layout_.momenta_offset(), state.momenta);
  write_mats(z, layout_.covectors_offset(), covectors, d);
  return z;
}

JetParticleState JetSystem::unpack(const Vec& z) const {
  const int n = layout_.count;
  const int d = layout_.dim;
  JetParticleState s;
  s.positions = read_points(z, layout_.positions_offset(), n, d);
  s.frames = read_mats(z, layout_.frames_offset(), n, d);
  s.momenta = read_points(z, layout_.momenta_offset(), n, d);
  const MatList covectors = read_mats(z, layout_.covectors_offset(), n, d);
  s.frame_momenta.resize(n);
  for (int i = 0; i < n; ++i) s.frame_momenta[i] = covectors[i] * s.frames[i].transpose();
  s.incompressible = incompressible_;
  return s;
}

MatList JetSystem::jet_momenta(const Vec& z) const {
  const int n = layout_.count;
  const int d = layout_.dim;
  const MatList frames = read_mats(z, layout_.frames_offset(), n, d);
  MatList out = read_mats(z, layout_.covectors_offset(), n, d);
  for (int i = 0; i < n; ++i) out[i] = frames[i].transpose() * out[i];
  return out;
}

Vec JetSystem::rhs(const Vec& z) const {
  const int n = layout_.count;
  const int d = layout_.dim;
  const JetParticleState s = unpack(z);
  const MatList covectors = read_mats(z, layout_.covectors_offset(), n, d);
  const JetRates rates = eom_k1(kernel_, s);
  MatList pdot(n);
  for (int i = 0; i < n; ++i) pdot[i] = -rates.frame_rates[i].transpose() * covectors[i];
  Vec dz(size());
  write_points(dz, layout_.positions_offset(), rates.positions);
  write_mats(dz, layout_.frames_offset(), rates.frames, d);
  write_points(dz, layout_.momenta_offset(), rates.momenta);
  write_mats(dz, layout_.covectors_offset(), pdot, d);
  return dz;
}

double JetSystem::energy(const Vec& z) const { return hamiltonian_k1(kernel_, unpack(z)); }

PointArray JetSystem::positions(const Vec& z) const {
  return read_points(z, layout_.positions_offset(), layout_.count, layout_.dim);
}

VelocityFieldView JetSystem::field(const Vec& z) const {
  auto s = unpack(z);
  return VelocityFieldView::kernel_k1(kernel_, std::move(s.positions), std::move(s.momenta),
                                      std::move(s.frame_momenta));
}

// ---- SpectralSystem -----------------------------------------------------

SpectralSystem::SpectralSystem(std::shared_ptr<const SpectralBasis> basis, int count)
    : basis_(std::move(basis)), layout_{count, 2, false} {
  if (!basis_) throw ConfigError("spectral system needs a basis");
}

Vec SpectralSystem::pack(const ParticleState& state) const {
  check_shape(state.positions, layout_.count, 2, "positions");
  check_shape(state.momenta, layout_.count, 2, "momenta");
  Vec z(size());
  write_points(z, layout_.positions_offset(), state.positions);
  write_points(z, layout_.momenta_offset(), state.momenta);
  return z;
}

ParticleState SpectralSystem::unpack(const Vec& z) const {
  return {read_points(z, layout_.positions_offset(), layout_.count, 2),
          read_points(z, layout_.momenta_offset(), layout_.count, 2)};
}

Vec SpectralSystem::rhs(const Vec& z) const {
  const ParticleState s = unpack(z);
  const Vec c = spectral_coefficients(*basis_, s.positions, s.momenta);
  PointArray xdot(layout_.count, 2);
  PointArray pdot(layout_.count, 2);
  for (int i = 0; i < layout_.count; ++i) {
    const Vec xi = s.positions.row(i).transpose();
    xdot.row(i) = basis_->eval(c, xi).transpose();
    pdot.row(i) = -(basis_->eval_grad(c, xi).transpose() * s.momenta.row(i).transpose()).transpose();
  }
  Vec dz(size());
  write_points(dz, layout_.positions_offset(), xdot);
  write_points(dz, layout_.momenta_offset(), pdot);
  return dz;
}

double SpectralSystem::energy(const Vec& z) const {
  const ParticleState s = unpack(z);
  return 0.5 * spectral_coefficients(*basis_, s.positions, s.momenta).squaredNorm();
}

PointArray SpectralSystem::positions(const Vec& z) const {
  return read_points(z, layout_.positions_offset(), layout_.count, 2);
}

VelocityFieldView SpectralSystem::field(const Vec& z) const {
  const ParticleState s = unpack(z);
  return VelocityFieldView::spectral(basis_, spectral_coefficients(*basis_, s.positions, s.momenta));
}

VortexSystem::VortexSystem(Vec strengths, double blob_width)
    : strengths_(std::move(strengths)), blob_width_(blob_width) {
  if (!(blob_width_ > 0.0)) throw ConfigError("blob width must be positive");
}

Vec VortexSystem::pack(const VortexState& state) const {
  if (state.strengths.size() != strengths_.size() || state.positions.rows() != strengths_.size()) {
    throw ConstraintError("vortex state does not match the system layout");
  }
  Vec z(size());
  for (Eigen::Index i = 0; i < state.positions.rows(); ++i) z.segment(2 * i, 2) = state.positions.row(i).transpose();
  return z;
}

VortexState VortexSystem::unpack(const Vec& z) const {
  VortexState s;
  s.positions = PointArray(strengths_.size(), 2);
  for (Eigen::Index i = 0; i < strengths_.size(); ++i) s.positions.row(i) = z.segment(2 * i, 2).transpose();
  s.strengths = strengths_;
  s.blob_width = blob_width_;
  return s;
}

Vec VortexSystem::rhs(const Vec& z) const {
  const PointArray v = blob_eom(unpack(z));
  Vec dz(size());
  for (Eigen::Index i = 0; i < v.rows(); ++i) dz.segment(2 * i, 2) = v.row(i).transpose();
  return dz;
}

double VortexSystem::energy(const Vec& z) const { return blob_energy(unpack(z)); }

PointArray VortexSystem::positions(const Vec& z) const { return unpack(z).positions; }

VelocityFieldView VortexSystem::field(const Vec& z) const {
  return VelocityFieldView::vortex_blob(unpack(z));
}

}  // namespace jetflow
