#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "jetflow/errors.hpp"
#include "jetflow/output.hpp"
#include "jetflow/scenario.hpp"

using namespace jetflow;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Fresh scratch directory per call, removed by the destructor.
struct Scratch {
  fs::path path;
  Scratch() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("jetflow_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Scratch() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(std::stod(cell));
  return out;
}

std::string config_error(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

Scenario quick(const std::string& preset, double t_end) {
  Scenario sc = preset_scenario(preset);
  sc.integrator.t_end = t_end;
  return sc;
}

int run_cli(const std::string& args, const fs::path& stderr_file = {}) {
  std::string cmd = std::string(JETFLOW_CLI_PATH) + " " + args + " > /dev/null";
  cmd += stderr_file.empty() ? " 2>/dev/null" : " 2> '" + stderr_file.string() + "'";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("diagnostics headers are fixed per preset") {
  const std::map<std::string, std::string> golden = {
      {"single_free_particle", "t,energy,px,py,ang,jet_norm_drift,monitor,circ_1"},
      {"headon_pair_k0", "t,energy,px,py,ang,jet_norm_drift,monitor,circ_1,circ_2"},
      {"ring_8_k0",
       "t,energy,px,py,ang,jet_norm_drift,monitor,circ_1,circ_2,circ_3,circ_4,circ_5,circ_6,circ_7,circ_8"},
      {"single_spin_jet", "t,energy,px,py,ang,jet_norm_drift,monitor,circ_1"},
      {"corotating_jets", "t,energy,px,py,ang,jet_norm_drift,monitor,circ_1,circ_2"},
      {"vortex_pair_translate", "t,energy,px,py,ang,jet_norm_drift,monitor,circ_1,circ_2"},
      {"corotating_blobs", "t,energy,px,py,ang,jet_norm_drift,monitor,circ_1,circ_2"},
      {"spectral_torus_4", "t,energy,px,py,ang,jet_norm_drift,monitor,circ_1,circ_2,circ_3,circ_4"},
  };
  REQUIRE(preset_names().size() == golden.size());
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    REQUIRE(golden.count(name) == 1);
    Scratch dir;
    Scenario sc = preset_scenario(name);
    sc.integrator.t_end = 2 * sc.integrator.dt;
    run_scenario(sc, dir.path);
    const auto rows = lines(slurp(dir.path / "diagnostics.csv"));
    REQUIRE(rows.size() >= 2);
    CHECK(rows[0] == golden.at(name));
  }
  CHECK(diagnostics_columns(3, 2) == std::vector<std::string>{"t", "energy", "px", "py", "pz", "ang_x", "ang_y",
                                                               "ang_z", "jet_norm_drift", "monitor"});
}

TEST_CASE("schema errors list every offending key") {
  const json doc = json::parse(R"({
    "name": "broken", "method": "landmark_k0", "colour": "red",
    "kernel": {"family": "gaussian", "length_scale": -1, "shape": 2},
    "integrator": {"method": "euler", "dt": 0.01, "t_end": 1},
    "initial": {"positions": [[0, 0], [1, 0]], "momenta": [[1, 0]], "spin": 3}
  })");
  const std::string msg = config_error(doc);
  CAPTURE(msg);
  CHECK(msg.find("(6 problems)") != std::string::npos);
  for (const char* key : {"colour", "kernel.length_scale", "kernel.shape", "integrator.method", "initial.momenta",
                          "initial.spin"}) {
    CHECK(msg.find(std::string("\n  ") + key + ":") != std::string::npos);
  }
}

TEST_CASE("schema rejects sections that do not belong to the method") {
  json doc = preset_json("vortex_pair_translate");
  doc["kernel"] = {{"family", "gaussian"}};
  doc["initial"]["momenta"] = {{1, 0}, {0, 1}};
  const std::string msg = config_error(doc);
  CHECK(msg.find("kernel:") != std::string::npos);
  CHECK(msg.find("initial.momenta:") != std::string::npos);

  json jets = preset_json("corotating_jets");
  jets["initial"]["frame_momenta"] = {{{1, 0}, {0, 1}}};
  CHECK(config_error(jets).find("initial.frame_momenta: need one matrix per particle") != std::string::npos);

  CHECK(config_error(json::parse(R"({"name": "x"})")).find("method: required") != std::string::npos);
  CHECK(config_error(json::parse(R"({"method": "fmm"})")).find("method:") != std::string::npos);
}

TEST_CASE("scenario files may carry comments and presets can be patched") {
  Scratch dir;
  {
    std::ofstream f(dir.path / "s.json");
    f << "// slower collision\n{\"preset\": \"headon_pair_k0\", /* inline */ \"integrator\": {\"t_end\": 1.5}}\n";
  }
  const Scenario sc = load_scenario((dir.path / "s.json").string());
  CHECK(sc.name == "headon_pair_k0");
  CHECK(sc.integrator.t_end == 1.5);
  CHECK(sc.integrator.dt == 0.01);
  CHECK(sc.positions(1, 0) == 2.0);

  CHECK_THROWS_AS(load_scenario((dir.path / "missing.json").string()), ConfigError);
}

TEST_CASE("scenarios round-trip through their canonical form") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const Scenario a = preset_scenario(name);
    const Scenario b = parse_scenario(to_json(a));
    CHECK(b.method == a.method);
    CHECK(b.positions == a.positions);
    CHECK(b.momenta.isApprox(a.momenta, 1e-15));
    CHECK(b.strengths == a.strengths);
    CHECK(to_json(b) == to_json(a));
  }
}

TEST_CASE("runs are bit-identical for identical inputs") {
  json doc = json::parse(R"({
    "name": "random_jets", "method": "jet_k1", "seed": 42,
    "integrator": {"method": "implicit_midpoint", "dt": 0.01, "t_end": 0.5, "observer_stride": 5},
    "initial": {"random": {"count": 5, "dim": 2, "extent": 4, "min_separation": 0.8,
                           "momentum_scale": 0.3, "frame_momentum_scale": 0.3}},
    "outputs": {"field": {"grid": "5,4,-1,3,-1,3", "times": [0.25]}}
  })");
  Scratch a, b, c;
  run_scenario(parse_scenario(doc), a.path);
  run_scenario(parse_scenario(doc), b.path);
  for (const char* f : {"trajectory.jsonl", "diagnostics.csv", "field_0.csv"}) {
    CAPTURE(f);
    CHECK(slurp(a.path / f) == slurp(b.path / f));
    CHECK(!slurp(a.path / f).empty());
  }
  doc["seed"] = 43;
  run_scenario(parse_scenario(doc), c.path);
  CHECK(slurp(a.path / "trajectory.jsonl") != slurp(c.path / "trajectory.jsonl"));
}

TEST_CASE("observer stride and final snapshot in the trajectory file") {
  Scratch dir;
  Scenario sc = quick("single_free_particle", 0.25);
  sc.integrator.observer_stride = 10;
  run_scenario(sc, dir.path);
  const auto rows = lines(slurp(dir.path / "trajectory.jsonl"));
  // Meta line, steps 0, 10, 20 and the final step 25.
  REQUIRE(rows.size() == 5);
  CHECK(json::parse(rows[0]).contains("meta"));
  CHECK(json::parse(rows[4])["step"] == 25);
  CHECK(json::parse(rows[4])["t"].get<double>() == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("single free particle moves in a straight line at constant energy") {
  Scratch dir;
  run_scenario(preset_scenario("single_free_particle"), dir.path);
  const StoredTrajectory traj = load_trajectory((dir.path / "trajectory.jsonl").string());
  const auto p0 = traj.records.front()["momenta"][0];
  for (const json& r : traj.records) {
    const double t = r["t"].get<double>();
    // A lone Gaussian particle moves at velocity K(0) p = p.
    CHECK(r["positions"][0][0].get<double>() == doctest::Approx(p0[0].get<double>() * t).epsilon(1e-12));
    CHECK(r["positions"][0][1].get<double>() == doctest::Approx(p0[1].get<double>() * t).epsilon(1e-12));
  }
  const auto rows = lines(slurp(dir.path / "diagnostics.csv"));
  const double e0 = split_numbers(rows[1])[1];
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(std::abs(split_numbers(rows[k])[1] - e0) <= 1e-14);
}

TEST_CASE("head-on pair never collides") {
  Scratch dir;
  Scenario sc = preset_scenario("headon_pair_k0");
  sc.integrator.observer_stride = 1;
  run_scenario(sc, dir.path);
  const StoredTrajectory traj = load_trajectory((dir.path / "trajectory.jsonl").string());
  double min_sep = INFINITY, x0_max = -INFINITY;
  for (const json& r : traj.records) {
    const double a = r["positions"][0][0].get<double>(), b = r["positions"][1][0].get<double>();
    min_sep = std::min(min_sep, b - a);
    x0_max = std::max(x0_max, a);
    CHECK(r["positions"][0][1].get<double>() == 0.0);
  }
  CHECK(traj.records.back()["t"].get<double>() == doctest::Approx(8.0));
  CHECK(min_sep > 0.0);
  CHECK(x0_max < 0.0);
}

TEST_CASE("vortex pair translates at unit speed") {
  Scratch dir;
  run_scenario(preset_scenario("vortex_pair_translate"), dir.path);
  const StoredTrajectory traj = load_trajectory((dir.path / "trajectory.jsonl").string());
  auto centroid = [](const json& r) {
    const auto& x = r["positions"];
    return std::pair{0.5 * (x[0][0].get<double>() + x[1][0].get<double>()),
                     0.5 * (x[0][1].get<double>() + x[1][1].get<double>())};
  };
  const auto [cx0, cy0] = centroid(traj.records.front());
  const auto [cx1, cy1] = centroid(traj.records.back());
  const double t = traj.records.back()["t"].get<double>();
  CHECK(std::hypot(cx1 - cx0, cy1 - cy0) / t == doctest::Approx(1.0).epsilon(0.01));
  // The path stays on a straight line through the start.
  for (const json& r : traj.records) CHECK(std::abs(centroid(r).first - cx0) <= 1e-12);
}

TEST_CASE("field samples") {
  Scratch dir;
  Scenario sc = quick("ring_8_k0", 0.5);
  sc.integrator.observer_stride = 5;
  run_scenario(sc, dir.path);
  const StoredTrajectory traj = load_trajectory((dir.path / "trajectory.jsonl").string());

  SUBCASE("a 3 x 3 grid gives nine rows") {
    std::ostringstream out;
    sample_field(traj, 0.2, FieldGrid::parse("3,3,-1,1,-1,1"), out);
    const auto rows = lines(out.str());
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == "x,y,u,v");
    CHECK(split_numbers(rows[1])[0] == -1.0);
    CHECK(split_numbers(rows[2])[0] == 0.0);
    CHECK(split_numbers(rows[4])[1] == 0.0);
  }

  SUBCASE("the field at a particle is its velocity") {
    // Particle 0 of the ring starts at (2, 0), a node of this grid.
    std::ostringstream out;
    CHECK(sample_field(traj, 0.0, FieldGrid::parse("5,5,-2,2,-2,2"), out) == 0.0);
    const auto& rec = traj.records.front();
    double u = 0.0, v = 0.0;
    for (std::size_t j = 0; j < rec["positions"].size(); ++j) {
      const double dx = 2.0 - rec["positions"][j][0].get<double>();
      const double dy = 0.0 - rec["positions"][j][1].get<double>();
      const double k = std::exp(-0.5 * (dx * dx + dy * dy));
      u += k * rec["momenta"][j][0].get<double>();
      v += k * rec["momenta"][j][1].get<double>();
    }
    bool found = false;
    for (const auto& row : lines(out.str())) {
      if (row[0] == 'x') continue;
      const auto n = split_numbers(row);
      if (n[0] == 2.0 && n[1] == 0.0) {
        found = true;
        CHECK(std::abs(n[2] - u) <= 1e-9);
        CHECK(std::abs(n[3] - v) <= 1e-9);
      }
    }
    CHECK(found);
  }

  SUBCASE("times outside the stored range are rejected") {
    std::ostringstream out;
    CHECK_THROWS_AS(sample_field(traj, 0.6, FieldGrid::parse("3,3,-1,1,-1,1"), out), DomainError);
    CHECK_THROWS_AS(sample_field(traj, -0.1, FieldGrid::parse("3,3,-1,1,-1,1"), out), DomainError);
  }
}

TEST_CASE("zero momentum gives a zero field") {
  json doc = preset_json("headon_pair_k0");
  doc["initial"]["momenta"] = {{0, 0}, {0, 0}};
  doc["integrator"]["t_end"] = 0.1;
  Scratch dir;
  run_scenario(parse_scenario(doc), dir.path);
  std::ostringstream out;
  sample_field(load_trajectory((dir.path / "trajectory.jsonl").string()), 0.1, FieldGrid::parse("4,3,-3,3,-1,1"),
               out);
  const auto rows = lines(out.str());
  REQUIRE(rows.size() == 13);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto n = split_numbers(rows[k]);
    CHECK(n[2] == 0.0);
    CHECK(n[3] == 0.0);
  }
}

TEST_CASE("field outputs at configured times") {
  json doc = preset_json("single_spin_jet");
  doc["integrator"]["t_end"] = 0.3;
  doc["outputs"] = {{"field", {{"grid", "3,2,-1,1,-1,1"}, {"times", {0.0, 0.3}}, {"prefix", "u"}}}};
  Scratch dir;
  const RunSummary s = run_scenario(parse_scenario(doc), dir.path);
  CHECK(s.notes.empty());
  CHECK(lines(slurp(dir.path / "u_0.csv")).size() == 7);
  CHECK(lines(slurp(dir.path / "u_1.csv")).size() == 7);

  doc["outputs"]["field"]["times"] = {0.5};
  CHECK(config_error(doc).find("outputs.field.times") != std::string::npos);
  doc["outputs"]["field"]["times"] = {0.1};
  doc["outputs"]["field"]["grid"] = "3,x,0,1,0,1";
  CHECK(config_error(doc).find("outputs.field.grid") != std::string::npos);
}

TEST_CASE("command line") {
  Scratch dir;
  const fs::path err = dir.path / "stderr.txt";

  CHECK(run_cli("verify interpolation") == 0);
  CHECK(run_cli("verify no_such_suite", err) != 0);
  CHECK(slurp(err).find("unknown suite") != std::string::npos);

  const std::string out_dir = (dir.path / "env_out").string();
  const std::string cmd = "env JETFLOW_OUTPUT_DIR='" + out_dir + "' " + std::string(JETFLOW_CLI_PATH) +
                          " run --preset single_free_particle > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(fs::path(out_dir) / "trajectory.jsonl"));
  CHECK(fs::exists(fs::path(out_dir) / "diagnostics.csv"));

  CHECK(run_cli("sample-field '" + out_dir + "/trajectory.jsonl' --t 1 --grid 3,3,-1,1,-1,1 -o '" +
                (dir.path / "f.csv").string() + "'") == 0);
  CHECK(lines(slurp(dir.path / "f.csv")).size() == 10);
  CHECK(run_cli("sample-field '" + out_dir + "/trajectory.jsonl' --t 99 --grid 3,3,-1,1,-1,1", err) != 0);
  CHECK(slurp(err).find("outside the trajectory range") != std::string::npos);

  {
    std::ofstream f(dir.path / "bad.json");
    f << R"({"method": "landmark_k0", "integratr": {}, "initial": {"positions": [[0, 0]], "momenta": [[1, 0]]}})";
  }
  CHECK(run_cli("run '" + (dir.path / "bad.json").string() + "' --output-dir '" + dir.path.string() + "/o'", err) !=
        0);
  CHECK(slurp(err).find("integratr: unknown key") != std::string::npos);

  CHECK(run_cli("run", err) != 0);
}
