#pragma once

#include <vector>

#include "jetflow/integrate.hpp"
#include "jetflow/vortex.hpp"

namespace jetflow {

/// Spin-only jet particles carrying the same vorticity as the blobs:
/// Gaussian kernel with sigma = delta, p_i = 0 and mu_i = Gamma_i / (2 pi) J,
/// which matches the rotation rate of each blob core.
JetParticleState spin_jets_from_blobs(const VortexState& blobs);

struct BlobJetReport {
  std::vector<double> times;
  /// max_i |x_i(blob) - x_i(jet)| at every stored time.
  std::vector<double> discrepancy;
  double max_discrepancy = 0.0;
  /// max_i |p_i| of the jet particles over the run.
  double max_jet_momentum = 0.0;
  bool momentum_within_tolerance = true;
  /// Angles swept about the initial centroid, per particle.
  std::vector<double> blob_swept_angle;
  std::vector<double> jet_swept_angle;
  bool sign_consistent = true;
};

/// Runs the blob dynamics and the jet dynamics from the same configuration
/// and measures how far apart they drift. The jets use a Gaussian kernel of
/// width blobs.blob_width.
BlobJetReport compare_with_jets(const VortexState& blobs, const JetParticleState& jets,
                                const IntegratorConfig& config, double tolerance);

}  // namespace jetflow
