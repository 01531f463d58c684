#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "jetflow/integrate.hpp"

namespace jetflow {

enum class Method { LandmarkK0, JetK1, SpectralK0, VortexBlob };

Method method_from_name(const std::string& name);
std::string to_string(Method method);

/// Rectangular sampling grid in the plane: nx x ny nodes spanning
/// [xmin, xmax] x [ymin, ymax]. In 3D the grid lies in the plane z = z.
struct FieldGrid {
  int nx = 0;
  int ny = 0;
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;
  double z = 0.0;

  /// "nx,ny,xmin,xmax,ymin,ymax"
  static FieldGrid parse(const std::string& spec);
  Vec node(int ix, int iy, int dim) const;
};

struct FieldOutput {
  FieldGrid grid;
  std::vector<double> times;
  /// Files are named <prefix>_<k>.csv, one per requested time.
  std::string prefix = "field";
};

struct OutputConfig {
  /// Empty means "a directory named after the scenario".
  std::string directory;
  std::string trajectory = "trajectory.jsonl";
  std::string diagnostics = "diagnostics.csv";
  std::optional<FieldOutput> field;
};

struct DiagnosticsConfig {
  bool enabled = true;
  /// Multiple of the system length scale.
  double circulation_radius = 0.01;
  int circulation_nodes = 64;
};

struct Scenario {
  std::string name;
  Method method = Method::LandmarkK0;

  std::string kernel_family = "gaussian";
  double length_scale = 1.0;
  double jitter = 0.0;
  bool incompressible = false;
  double box_length = 0.0;
  int cutoff = 0;
  double blob_width = 0.0;

  IntegratorConfig integrator;
  std::uint64_t seed = 0;

  PointArray positions;
  PointArray momenta;
  MatList frames;
  MatList frame_momenta;
  Vec strengths;

  OutputConfig outputs;
  DiagnosticsConfig diagnostics;

  int count() const { return static_cast<int>(positions.rows()); }
  int dim() const { return static_cast<int>(positions.cols()); }
  RadialKernel kernel() const;
};

/// Builds a scenario from its JSON description. A "preset" key starts from
/// the named preset and applies the remaining keys on top (JSON merge
/// patch). Every schema problem is collected and reported in one
/// ConfigError.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

std::vector<std::string> preset_names();
nlohmann::json preset_json(const std::string& name);
Scenario preset_scenario(const std::string& name);

/// Canonical JSON form of a scenario (momenta rather than velocities,
/// explicit arrays rather than random placement); parse_scenario of the
/// result reproduces the scenario.
nlohmann::json to_json(const Scenario& scenario);

std::unique_ptr<PhaseSystem> make_system(const Scenario& scenario);
Vec initial_state(const Scenario& scenario, const PhaseSystem& system);

/// Copy of the scenario whose initial data is taken from a phase vector.
Scenario with_state(const Scenario& scenario, const PhaseSystem& system, const Vec& z);

}  // namespace jetflow
