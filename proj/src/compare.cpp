#include "jetflow/compare.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "jetflow/errors.hpp"

namespace jetflow {

JetParticleState spin_jets_from_blobs(const VortexState& blobs) {
  blobs.validate();
  JetParticleState jets = JetParticleState::at_rest(blobs.positions);
  for (int i = 0; i < blobs.count(); ++i) {
    jets.frame_momenta[i] = blobs.strengths(i) / (2.0 * std::numbers::pi) * spin_generator();
  }
  return jets;
}

namespace {

// Unwrapped angle swept by each particle around `center` along the run.
std::vector<double> swept_angles(const std::vector<PointArray>& path, const Vec& center) {
  const auto n = path.front().rows();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 1; k < path.size(); ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vec a = path[k - 1].row(i).transpose() - center;
      const Vec b = path[k].row(i).transpose() - center;
      if (a.norm() < 1e-12 || b.norm() < 1e-12) continue;
      out[i] += std::atan2(a(0) * b(1) - a(1) * b(0), a.dot(b));
    }
  }
  return out;
}

}  // namespace

BlobJetReport compare_with_jets(const VortexState& blobs, const JetParticleState& jets,
                                const IntegratorConfig& config, double tolerance) {
  blobs.validate();
  jets.validate();
  if (blobs.count() != jets.count()) {
    throw ConfigError("blob and jet configurations have different particle counts");
  }
  if (jets.dim() != 2) throw ConfigError("blob/jet comparison is two-dimensional");

  const VortexSystem blob_system(blobs.strengths, blobs.blob_width);
  const JetSystem jet_system(RadialKernel::gaussian(blobs.blob_width), jets.count(), 2,
                             jets.incompressible);
  IntegratorConfig cfg = config;
  cfg.observer_stride = 1;
  cfg.stop_on_monitor.reset();
  const Trajectory blob_run = integrate(blob_system, blob_system.pack(blobs), cfg);
  const Trajectory jet_run = integrate(jet_system, jet_system.pack(jets), cfg);

  BlobJetReport report;
  std::vector<PointArray> blob_path;
  std::vector<PointArray> jet_path;
  const auto n_snap = std::min(blob_run.snapshots.size(), jet_run.snapshots.size());
  for (std::size_t k = 0; k < n_snap; ++k) {
    const PointArray xb = blob_system.positions(blob_run.snapshots[k].state);
    const JetParticleState sj = jet_system.unpack(jet_run.snapshots[k].state);
    double gap = 0.0;
    for (Eigen::Index i = 0; i < xb.rows(); ++i) {
      gap = std::max(gap, (xb.row(i) - sj.positions.row(i)).norm());
      report.max_jet_momentum = std::max(report.max_jet_momentum, sj.momenta.row(i).norm());
    }
    report.times.push_back(blob_run.snapshots[k].t);
    report.discrepancy.push_back(gap);
    report.max_discrepancy = std::max(report.max_discrepancy, gap);
    blob_path.push_back(xb);
    jet_path.push_back(sj.positions);
  }
  report.momentum_within_tolerance = report.max_jet_momentum <= tolerance;

  const Vec center = blobs.positions.colwise().mean().transpose();
  report.blob_swept_angle = swept_angles(blob_path, center);
  report.jet_swept_angle = swept_angles(jet_path, center);
  constexpr double kStill = 1e-12;
  for (std::size_t i = 0; i < report.blob_swept_angle.size(); ++i) {
    const double a = report.blob_swept_angle[i];
    const double b = report.jet_swept_angle[i];
    const bool both_still = std::abs(a) <= kStill && std::abs(b) <= kStill;
    if (!both_still && a * b <= 0.0) report.sign_consistent = false;
  }
  return report;
}

}  // namespace jetflow
