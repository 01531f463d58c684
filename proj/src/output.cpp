#include "jetflow/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>

#include "jetflow/errors.hpp"

namespace jetflow {

using nlohmann::json;

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::vector<std::string> diagnostics_columns(int dim, int count) {
  std::vector<std::string> cols = {"t", "energy"};
  const char* axes[] = {"x", "y", "z"};
  for (int a = 0; a < dim && a < 3; ++a) cols.push_back(std::string("p") + axes[a]);
  if (dim == 2) cols.push_back("ang");
  if (dim == 3) {
    for (const char* a : axes) cols.push_back(std::string("ang_") + a);
  }
  cols.push_back("jet_norm_drift");
  cols.push_back("monitor");
  if (dim == 2) {
    for (int i = 1; i <= count; ++i) cols.push_back("circ_" + std::to_string(i));
  }
  return cols;
}

DiagnosticsWriter::DiagnosticsWriter(std::ostream& out, int dim, int count)
    : out_(out), dim_(dim), count_(count) {
  const auto cols = diagnostics_columns(dim, count);
  for (std::size_t k = 0; k < cols.size(); ++k) out_ << (k ? "," : "") << cols[k];
  out_ << '\n';
}

void DiagnosticsWriter::write(const DiagnosticsRecord& rec) {
  if (first_) {
    initial_jets_ = rec.jet_momenta;
    first_ = false;
  }
  double drift = 0.0;
  for (std::size_t i = 0; i < rec.jet_momenta.size() && i < initial_jets_.size(); ++i) {
    const double ref = std::max(1.0, initial_jets_[i].norm());
    drift = std::max(drift, (rec.jet_momenta[i] - initial_jets_[i]).norm() / ref);
  }
  out_ << format_number(rec.t) << ',' << format_number(rec.energy);
  for (int a = 0; a < dim_; ++a) {
    out_ << ',' << format_number(a < rec.linear_momentum.size() ? rec.linear_momentum(a) : 0.0);
  }
  const int n_ang = dim_ == 2 ? 1 : (dim_ == 3 ? 3 : 0);
  for (int a = 0; a < n_ang; ++a) {
    out_ << ',' << format_number(a < rec.angular_momentum.size() ? rec.angular_momentum(a) : 0.0);
  }
  out_ << ',' << format_number(drift) << ',' << format_number(rec.monitor);
  if (dim_ == 2) {
    for (int i = 0; i < count_; ++i) {
      const double c = i < static_cast<int>(rec.circulations.size()) ? rec.circulations[i] : 0.0;
      out_ << ',' << format_number(c);
    }
  }
  out_ << '\n';
}

namespace {

json matrix_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json matrix_list_json(const MatList& list) {
  json out = json::array();
  for (const Mat& m : list) out.push_back(matrix_json(m));
  return out;
}

Mat json_matrix(const json& rows) {
  if (!rows.is_array() || rows.empty() || !rows[0].is_array()) {
    throw ConfigError("trajectory record: malformed matrix");
  }
  Mat m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw ConfigError("trajectory record: ragged matrix");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

}  // namespace

json trajectory_meta(const Scenario& scenario) {
  return {{"meta", {{"format", "jetflow-trajectory"}, {"version", 1}, {"scenario", to_json(scenario)}}}};
}

json trajectory_record(const PhaseSystem& system, const Snapshot& snap) {
  json rec = {{"step", snap.step}, {"t", snap.t}};
  if (const auto* s = dynamic_cast<const JetSystem*>(&system)) {
    const JetParticleState st = s->unpack(snap.state);
    rec["positions"] = matrix_json(st.positions);
    rec["momenta"] = matrix_json(st.momenta);
    rec["frames"] = matrix_list_json(st.frames);
    rec["frame_momenta"] = matrix_list_json(st.frame_momenta);
  } else if (const auto* s = dynamic_cast<const LandmarkSystem*>(&system)) {
    const ParticleState st = s->unpack(snap.state);
    rec["positions"] = matrix_json(st.positions);
    rec["momenta"] = matrix_json(st.momenta);
  } else if (const auto* s = dynamic_cast<const SpectralSystem*>(&system)) {
    const ParticleState st = s->unpack(snap.state);
    rec["positions"] = matrix_json(st.positions);
    rec["momenta"] = matrix_json(st.momenta);
  } else {
    rec["positions"] = matrix_json(system.positions(snap.state));
  }
  return rec;
}

void write_field_csv(std::ostream& out, const VelocityFieldView& field, const FieldGrid& grid) {
  const int d = field.dim();
  if (d < 2) throw ConfigError("field samples need a 2D or 3D field");
  out << (d == 3 ? "x,y,z,u,v,w\n" : "x,y,u,v\n");
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const Vec m = grid.node(ix, iy, d);
      const Vec u = field.eval(m);
      for (int a = 0; a < d; ++a) out << format_number(m(a)) << ',';
      for (int a = 0; a < d; ++a) out << format_number(u(a)) << (a + 1 < d ? ',' : '\n');
    }
  }
}

StoredTrajectory load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read trajectory file '" + path + "'");
  StoredTrajectory out;
  std::string line;
  bool have_meta = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ConfigError("trajectory line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!have_meta) {
      if (!j.contains("meta")) throw ConfigError("trajectory file lacks its meta line");
      out.scenario = parse_scenario(j["meta"]["scenario"]);
      have_meta = true;
      continue;
    }
    out.records.push_back(std::move(j));
  }
  if (!have_meta) throw ConfigError("trajectory file '" + path + "' is empty");
  if (out.records.empty()) throw ConfigError("trajectory file '" + path + "' has no records");
  return out;
}

double sample_field(const StoredTrajectory& traj, double t, const FieldGrid& grid, std::ostream& out) {
  const double t0 = traj.records.front()["t"].get<double>();
  const double t1 = traj.records.back()["t"].get<double>();
  const double slack = 1e-9 * std::max(1.0, std::abs(t1));
  if (!(t >= t0 - slack && t <= t1 + slack)) {
    throw DomainError("time " + format_number(t) + " is outside the trajectory range [" +
                      format_number(t0) + ", " + format_number(t1) + "]");
  }
  const json* best = &traj.records.front();
  for (const json& r : traj.records) {
    if (std::abs(r["t"].get<double>() - t) < std::abs((*best)["t"].get<double>() - t)) best = &r;
  }
  Scenario sc = traj.scenario;
  sc.positions = json_matrix((*best)["positions"]);
  if (best->contains("momenta")) sc.momenta = json_matrix((*best)["momenta"]);
  if (best->contains("frames")) {
    sc.frames.clear();
    for (const json& m : (*best)["frames"]) sc.frames.push_back(json_matrix(m));
    sc.frame_momenta.clear();
    for (const json& m : (*best)["frame_momenta"]) sc.frame_momenta.push_back(json_matrix(m));
  }
  const auto system = make_system(sc);
  write_field_csv(out, system->field(initial_state(sc, *system)), grid);
  return (*best)["t"].get<double>();
}

RunSummary run_scenario(const Scenario& sc, const std::filesystem::path& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw ConfigError("cannot create output directory '" + directory.string() + "': " + ec.message());

  RunSummary summary;
  const auto system = make_system(sc);
  const Vec z0 = initial_state(sc, *system);

  auto open = [&](const std::string& name) {
    const fs::path path = directory / name;
    auto stream = std::make_unique<std::ofstream>(path);
    if (!*stream) throw ConfigError("cannot write '" + path.string() + "'");
    summary.files.push_back(path);
    return stream;
  };

  std::unique_ptr<std::ofstream> traj_out, diag_out;
  std::unique_ptr<DiagnosticsWriter> diag;
  if (!sc.outputs.trajectory.empty()) {
    traj_out = open(sc.outputs.trajectory);
    *traj_out << trajectory_meta(sc).dump() << '\n';
  }
  if (sc.diagnostics.enabled && !sc.outputs.diagnostics.empty()) {
    diag_out = open(sc.outputs.diagnostics);
    diag = std::make_unique<DiagnosticsWriter>(*diag_out, sc.dim(), sc.count());
  }
  const RecordOptions rec_opts{sc.diagnostics.circulation_radius, sc.diagnostics.circulation_nodes};

  // Field samples are taken at the step nearest each requested time.
  std::multimap<long long, std::size_t> field_steps;
  if (sc.outputs.field) {
    const auto& times = sc.outputs.field->times;
    for (std::size_t k = 0; k < times.size(); ++k) {
      field_steps.emplace(std::llround(times[k] / sc.integrator.dt), k);
    }
  }
  std::vector<bool> field_done(field_steps.size(), false);

  const long long n_steps = std::llround(sc.integrator.t_end / sc.integrator.dt);
  const int stride = sc.integrator.observer_stride;
  int last_written = -1;
  auto emit = [&](const PhaseSystem& sys, const Snapshot& snap) {
    if (traj_out) *traj_out << trajectory_record(sys, snap).dump() << '\n';
    if (diag) diag->write(record(sys, snap.state, snap.t, rec_opts));
    last_written = snap.step;
  };
  auto observer = [&](const PhaseSystem& sys, const Snapshot& snap) {
    if (snap.step % stride == 0 || snap.step == n_steps) emit(sys, snap);
    auto range = field_steps.equal_range(snap.step);
    for (auto it = range.first; it != range.second; ++it) {
      const auto k = it->second;
      auto out = open(sc.outputs.field->prefix + "_" + std::to_string(k) + ".csv");
      write_field_csv(*out, sys.field(snap.state), sc.outputs.field->grid);
      field_done[k] = true;
    }
  };

  IntegratorConfig cfg = sc.integrator;
  cfg.observer_stride = 1;
  const Trajectory traj = integrate(*system, z0, cfg, {observer});
  if (traj.back().step != last_written) emit(*system, traj.back());

  for (std::size_t k = 0; k < field_done.size(); ++k) {
    if (!field_done[k]) {
      summary.notes.push_back("field sample at t = " + format_number(sc.outputs.field->times[k]) +
                              " skipped: the run stopped at t = " + format_number(traj.back().t));
    }
  }
  summary.status = traj.status;
  summary.steps = traj.steps;
  summary.t_final = traj.back().t;
  summary.energy_initial = system->energy(z0);
  summary.energy_final = system->energy(traj.back().state);
  return summary;
}

}  // namespace jetflow
