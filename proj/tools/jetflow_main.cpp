#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "jetflow/errors.hpp"
#include "jetflow/output.hpp"
#include "jetflow/scenario.hpp"
#include "jetflow/verify.hpp"

namespace {

using namespace jetflow;

constexpr const char* kOutputDirEnv = "JETFLOW_OUTPUT_DIR";

// Command-line flag, then the environment, then the scenario file, then the
// scenario name.
std::filesystem::path output_directory(const Scenario& sc, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  if (!sc.outputs.directory.empty()) return sc.outputs.directory;
  return sc.name.empty() ? "run" : sc.name;
}

int cmd_run(const std::string& file, const std::string& preset, const std::string& out_dir) {
  const Scenario sc = preset.empty() ? load_scenario(file) : preset_scenario(preset);
  const auto dir = output_directory(sc, out_dir);
  const RunSummary s = run_scenario(sc, dir);
  std::cout << "scenario " << (sc.name.empty() ? "(unnamed)" : sc.name) << ": " << to_string(s.status) << " after "
            << s.steps << " steps, t = " << format_number(s.t_final) << '\n';
  std::cout << "energy " << format_number(s.energy_initial) << " -> " << format_number(s.energy_final) << '\n';
  for (const auto& note : s.notes) std::cout << "note: " << note << '\n';
  for (const auto& f : s.files) std::cout << "wrote " << f.string() << '\n';
  return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  const SuiteReport report = run_suite(suite, seed);
  print_report(std::cout, report);
  const auto failed = std::count_if(report.checks.begin(), report.checks.end(), [](const auto& c) { return !c.pass; });
  std::cout << report.checks.size() - failed << '/' << report.checks.size() << " checks passed\n";
  return failed ? 1 : 0;
}

int cmd_sample(const std::string& traj_path, double t, const std::string& grid_spec, const std::string& out_path) {
  const StoredTrajectory traj = load_trajectory(traj_path);
  const FieldGrid grid = FieldGrid::parse(grid_spec);
  if (out_path.empty() || out_path == "-") {
    const double used = sample_field(traj, t, grid, std::cout);
    std::cerr << "sampled stored record at t = " << format_number(used) << '\n';
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) throw ConfigError("cannot write '" + out_path + "'");
  const double used = sample_field(traj, t, grid, out);
  std::cerr << "sampled stored record at t = " << format_number(used) << ", wrote " << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Particle-based fluid simulator built on kernel interpolation"};
  app.require_subcommand(1);

  std::string run_file, run_preset, run_out;
  auto* run = app.add_subcommand("run", "Run a scenario file or a named preset");
  run->add_option("file", run_file, "Scenario file (JSON)");
  run->add_option("--preset", run_preset, "Run a built-in preset instead of a file");
  run->add_option("--output-dir", run_out,
                  std::string("Output directory (overrides ") + kOutputDirEnv + " and the scenario)");

  std::string suite;
  std::uint64_t seed = 1;
  auto* verify = app.add_subcommand("verify", "Run a property suite and print one line per check");
  verify->add_option("suite", suite, "all, interpolation, gradients, conservation, curvature, convergence, "
                                     "vortex, spectral or comparison")
      ->required();
  verify->add_option("--seed", seed, "Seed for the randomized suites");

  std::string traj_path, grid_spec, sample_out;
  double sample_t = 0.0;
  auto* sample = app.add_subcommand("sample-field", "Sample the velocity field of a stored trajectory");
  sample->add_option("trajectory", traj_path, "Trajectory file written by run")->required();
  sample->add_option("--t", sample_t, "Time to sample")->required();
  sample->add_option("--grid", grid_spec, "nx,ny,xmin,xmax,ymin,ymax")->required();
  sample->add_option("-o,--output", sample_out, "Output CSV (default: standard output)");

  std::string show_name;
  auto* show = app.add_subcommand("show-preset", "Print a preset as a scenario file, or list the presets");
  show->add_option("name", show_name, "Preset name");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (run_file.empty() == run_preset.empty()) {
        throw ConfigError("run needs exactly one of a scenario file or --preset");
      }
      return cmd_run(run_file, run_preset, run_out);
    }
    if (*verify) return cmd_verify(suite, seed);
    if (*sample) return cmd_sample(traj_path, sample_t, grid_spec, sample_out);
    if (*show) {
      if (show_name.empty()) {
        for (const auto& n : preset_names()) std::cout << n << '\n';
      } else {
        std::cout << preset_json(show_name).dump(2) << '\n';
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
