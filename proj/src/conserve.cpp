#include "jetflow/conserve.hpp"

namespace jetflow {

namespace {

// Components of sum_i x_i ^ p_i + antisym(extra).
Vec angular_components(const PointArray& x, const PointArray& p, const Mat& extra) {
  const auto d = x.cols();
  Mat M = p.transpose() * x;  // sum_i p_i x_i^T
  if (extra.size() > 0) M += extra;
  if (d == 2) {
    Vec a(1);
    a << M(1, 0) - M(0, 1);
    return a;
  }
  if (d == 3) {
    Vec a(3);
    a << M(2, 1) - M(1, 2), M(0, 2) - M(2, 0), M(1, 0) - M(0, 1);
    return a;
  }
  return Vec(0);
}

}  // namespace

Vec noether_linear(const ParticleState& state) { return state.momenta.colwise().sum().transpose(); }

Vec noether_linear(const JetParticleState& state) { return state.momenta.colwise().sum().transpose(); }

Vec noether_angular(const ParticleState& state) {
  return angular_components(state.positions, state.momenta, Mat());
}

Vec noether_angular(const JetParticleState& state) {
  const auto d = state.positions.cols();
  Mat spin = Mat::Zero(d, d);
  for (const Mat& mu : state.frame_momenta) spin += mu;
  return angular_components(state.positions, state.momenta, spin);
}

Mat noether_jet(const JetParticleState& state, int i) {
  return state.frames.at(i).transpose() * state.frame_covector(i);
}

DiagnosticsRecord record(const PhaseSystem& system, const Vec& z, double t,
                         const RecordOptions& options) {
  DiagnosticsRecord rec;
  rec.t = t;
  rec.energy = system.energy(z);
  const VelocityFieldView field = system.field(z);
  const PointArray x = system.positions(z);
  rec.monitor = constraint_force_monitor(field, rows_of(x));

  if (const auto* jets = dynamic_cast<const JetSystem*>(&system)) {
    const JetParticleState s = jets->unpack(z);
    rec.linear_momentum = noether_linear(s);
    rec.angular_momentum = noether_angular(s);
    rec.jet_momenta = jets->jet_momenta(z);
  } else if (const auto* lm = dynamic_cast<const LandmarkSystem*>(&system)) {
    const ParticleState s = lm->unpack(z);
    rec.linear_momentum = noether_linear(s);
    rec.angular_momentum = noether_angular(s);
  } else if (const auto* sp = dynamic_cast<const SpectralSystem*>(&system)) {
    const ParticleState s = sp->unpack(z);
    rec.linear_momentum = noether_linear(s);
    rec.angular_momentum = noether_angular(s);
  } else if (const auto* vs = dynamic_cast<const VortexSystem*>(&system)) {
    const BlobInvariants inv = blob_invariants(vs->unpack(z));
    rec.linear_momentum = inv.linear_impulse;
    rec.angular_momentum = Vec::Constant(1, inv.angular_impulse);
  }

  if (x.cols() == 2) {
    const double radius = options.circulation_radius * system.length_scale();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      rec.circulations.push_back(
          circulation(field, x.row(i).transpose(), radius, options.circulation_nodes));
    }
  }
  return rec;
}

}  // namespace jetflow
