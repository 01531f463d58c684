#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "jetflow/conserve.hpp"
#include "jetflow/scenario.hpp"

namespace jetflow {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

/// Diagnostics CSV columns:
///   t, energy, px[, py[, pz]], ang (2D) or ang_x, ang_y, ang_z (3D),
///   jet_norm_drift, monitor, circ_1 .. circ_N (2D only).
std::vector<std::string> diagnostics_columns(int dim, int count);

class DiagnosticsWriter {
 public:
  DiagnosticsWriter(std::ostream& out, int dim, int count);
  /// jet_norm_drift is max_i |D_i^T P_i - (D_i^T P_i)(0)| / max(1, |(D_i^T P_i)(0)|),
  /// measured against the first record written; 0 for methods without frames.
  void write(const DiagnosticsRecord& rec);

 private:
  std::ostream& out_;
  int dim_;
  int count_;
  MatList initial_jets_;
  bool first_ = true;
};

/// First line of a trajectory file: {"meta": {...}} with the scenario that
/// produced it.
nlohmann::json trajectory_meta(const Scenario& scenario);
/// {"step", "t", "positions", "momenta", "frames"?, "frame_momenta"?}; vortex
/// records carry positions only (strengths are in the meta line).
nlohmann::json trajectory_record(const PhaseSystem& system, const Snapshot& snapshot);

/// x, y, u, v (2D) or x, y, z, u, v, w (3D) on the grid nodes, x fastest.
void write_field_csv(std::ostream& out, const VelocityFieldView& field, const FieldGrid& grid);

struct StoredTrajectory {
  Scenario scenario;
  std::vector<nlohmann::json> records;
};

StoredTrajectory load_trajectory(const std::string& path);

/// Writes the field CSV at the stored record closest to time t and returns
/// that record's time. Throws DomainError when t lies outside the stored
/// time range.
double sample_field(const StoredTrajectory& trajectory, double t, const FieldGrid& grid, std::ostream& out);

struct RunSummary {
  RunStatus status = RunStatus::Completed;
  int steps = 0;
  double t_final = 0.0;
  double energy_initial = 0.0;
  double energy_final = 0.0;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> notes;
};

/// Runs a scenario and writes its outputs under `directory`.
RunSummary run_scenario(const Scenario& scenario, const std::filesystem::path& directory);

}  // namespace jetflow
