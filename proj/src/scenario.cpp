#include "jetflow/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "jetflow/errors.hpp"

namespace jetflow {

using nlohmann::json;

Method method_from_name(const std::string& name) {
  if (name == "landmark_k0") return Method::LandmarkK0;
  if (name == "jet_k1") return Method::JetK1;
  if (name == "spectral_k0") return Method::SpectralK0;
  if (name == "vortex_blob") return Method::VortexBlob;
  throw ConfigError("unknown method '" + name +
                    "' (expected landmark_k0, jet_k1, spectral_k0 or vortex_blob)");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::LandmarkK0: return "landmark_k0";
    case Method::JetK1: return "jet_k1";
    case Method::SpectralK0: return "spectral_k0";
    case Method::VortexBlob: return "vortex_blob";
  }
  return "?";
}

FieldGrid FieldGrid::parse(const std::string& spec) {
  std::vector<double> v;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("grid: '" + item + "' is not a number");
    }
  }
  if (v.size() != 6) throw ConfigError("grid: expected nx,ny,xmin,xmax,ymin,ymax");
  FieldGrid g;
  if (v[0] != std::floor(v[0]) || v[1] != std::floor(v[1]) || v[0] < 1 || v[1] < 1) {
    throw ConfigError("grid: nx and ny must be positive integers");
  }
  g.nx = static_cast<int>(v[0]);
  g.ny = static_cast<int>(v[1]);
  g.xmin = v[2];
  g.xmax = v[3];
  g.ymin = v[4];
  g.ymax = v[5];
  if (!(g.xmax >= g.xmin) || !(g.ymax >= g.ymin)) throw ConfigError("grid: empty bounds");
  return g;
}

Vec FieldGrid::node(int ix, int iy, int dim) const {
  Vec m = Vec::Zero(dim);
  m(0) = nx == 1 ? xmin : xmin + (xmax - xmin) * ix / (nx - 1);
  m(1) = ny == 1 ? ymin : ymin + (ymax - ymin) * iy / (ny - 1);
  if (dim == 3) m(2) = z;
  return m;
}

RadialKernel Scenario::kernel() const { return RadialKernel::from_name(kernel_family, length_scale); }

namespace {

// ---- schema walking ------------------------------------------------------

struct Errors {
  std::vector<std::string> list;
  void add(const std::string& key, const std::string& msg) { list.push_back(key + ": " + msg); }
};

// One JSON object; remembers which keys were read so the rest can be
// reported as unknown.
class Section {
 public:
  Section(const json* obj, std::string path, Errors& errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (obj_ && !obj_->is_object()) {
      errors_.add(path_, "expected an object");
      obj_ = nullptr;
    }
  }

  bool present() const { return obj_ != nullptr; }
  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  const json* raw(const std::string& k) {
    seen_.insert(k);
    if (!obj_) return nullptr;
    auto it = obj_->find(k);
    return it == obj_->end() ? nullptr : &*it;
  }

  bool has(const std::string& k) const { return obj_ && obj_->contains(k); }

  Section sub(const std::string& k) { return Section(raw(k), key(k), errors_); }

  std::optional<double> number(const std::string& k) {
    const json* v = raw(k);
    if (!v || v->is_null()) return std::nullopt;
    if (!v->is_number()) {
      errors_.add(key(k), "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<long long> integer(const std::string& k) {
    const json* v = raw(k);
    if (!v || v->is_null()) return std::nullopt;
    if (!v->is_number_integer()) {
      errors_.add(key(k), "expected an integer");
      return std::nullopt;
    }
    return v->get<long long>();
  }

  std::optional<bool> boolean(const std::string& k) {
    const json* v = raw(k);
    if (!v || v->is_null()) return std::nullopt;
    if (!v->is_boolean()) {
      errors_.add(key(k), "expected true or false");
      return std::nullopt;
    }
    return v->get<bool>();
  }

  std::optional<std::string> string(const std::string& k) {
    const json* v = raw(k);
    if (!v || v->is_null()) return std::nullopt;
    if (!v->is_string()) {
      errors_.add(key(k), "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  void finish() const {
    if (!obj_) return;
    for (auto it = obj_->begin(); it != obj_->end(); ++it) {
      if (!seen_.count(it.key())) errors_.add(key(it.key()), "unknown key");
    }
  }

  // Reports a key that is present but not allowed for this method.
  void forbid(const std::string& k, const std::string& why) {
    if (has(k)) errors_.add(key(k), why);
    seen_.insert(k);
  }

  Errors& errors() { return errors_; }

 private:
  const json* obj_;
  std::string path_;
  Errors& errors_;
  std::set<std::string> seen_;
};

std::optional<Vec> parse_vector(const json& v, const std::string& key, Errors& errors) {
  if (!v.is_array() || v.empty()) {
    errors.add(key, "expected a non-empty array of numbers");
    return std::nullopt;
  }
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      errors.add(key, "entry " + std::to_string(i) + " is not a number");
      return std::nullopt;
    }
    out(i) = v[i].get<double>();
  }
  return out;
}

// rows x cols array of arrays.
std::optional<Mat> parse_matrix(const json& v, const std::string& key, Errors& errors) {
  if (!v.is_array() || v.empty()) {
    errors.add(key, "expected a non-empty array of rows");
    return std::nullopt;
  }
  std::size_t cols = 0;
  Mat out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto row = parse_vector(v[i], key + "[" + std::to_string(i) + "]", errors);
    if (!row) return std::nullopt;
    if (i == 0) {
      cols = row->size();
      out.resize(v.size(), cols);
    } else if (static_cast<std::size_t>(row->size()) != cols) {
      errors.add(key, "rows have different lengths");
      return std::nullopt;
    }
    out.row(i) = row->transpose();
  }
  return out;
}

std::optional<MatList> parse_matrix_list(const json& v, const std::string& key, Errors& errors) {
  if (!v.is_array()) {
    errors.add(key, "expected an array of matrices");
    return std::nullopt;
  }
  MatList out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto m = parse_matrix(v[i], key + "[" + std::to_string(i) + "]", errors);
    if (!m) return std::nullopt;
    out.push_back(*m);
  }
  return out;
}

json to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const MatList& list) {
  json out = json::array();
  for (const Mat& m : list) out.push_back(to_json(m));
  return out;
}

json to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

// ---- presets -------------------------------------------------------------

std::map<std::string, json> build_presets() {
  const double pi = std::numbers::pi;
  std::map<std::string, json> p;

  p["single_free_particle"] = {
      {"name", "single_free_particle"},
      {"method", "landmark_k0"},
      {"kernel", {{"family", "gaussian"}, {"length_scale", 1.0}}},
      {"integrator", {{"method", "implicit_midpoint"}, {"dt", 0.01}, {"t_end", 5.0}, {"observer_stride", 10}}},
      {"initial", {{"positions", {{0.0, 0.0}}}, {"momenta", {{1.0, 0.5}}}}},
  };

  p["headon_pair_k0"] = {
      {"name", "headon_pair_k0"},
      {"method", "landmark_k0"},
      {"kernel", {{"family", "gaussian"}, {"length_scale", 1.0}}},
      {"integrator", {{"method", "implicit_midpoint"}, {"dt", 0.01}, {"t_end", 8.0}, {"observer_stride", 10}}},
      {"initial", {{"positions", {{-2.0, 0.0}, {2.0, 0.0}}}, {"momenta", {{1.0, 0.0}, {-1.0, 0.0}}}}},
  };

  // Eight landmarks on a circle of radius 2 moving tangentially.
  json ring_x = json::array(), ring_p = json::array();
  for (int k = 0; k < 8; ++k) {
    const double a = 2.0 * pi * k / 8.0;
    ring_x.push_back({2.0 * std::cos(a), 2.0 * std::sin(a)});
    ring_p.push_back({-0.5 * std::sin(a), 0.5 * std::cos(a)});
  }
  p["ring_8_k0"] = {
      {"name", "ring_8_k0"},
      {"method", "landmark_k0"},
      {"kernel", {{"family", "gaussian"}, {"length_scale", 1.0}}},
      {"integrator", {{"method", "implicit_midpoint"}, {"dt", 0.01}, {"t_end", 10.0}, {"observer_stride", 10}}},
      {"initial", {{"positions", ring_x}, {"momenta", ring_p}}},
  };

  const json spin = {{0.0, -1.0}, {1.0, 0.0}};
  p["single_spin_jet"] = {
      {"name", "single_spin_jet"},
      {"method", "jet_k1"},
      {"kernel", {{"family", "gaussian"}, {"length_scale", 1.0}}},
      {"integrator", {{"method", "implicit_midpoint"}, {"dt", 0.01}, {"t_end", 10.0}, {"observer_stride", 10}}},
      {"initial", {{"positions", {{0.0, 0.0}}}, {"momenta", {{0.0, 0.0}}}, {"frame_momenta", {spin}}}},
  };

  // Two equal spinning jets 2.5 sigma apart, starting with p = 0.
  p["corotating_jets"] = {
      {"name", "corotating_jets"},
      {"method", "jet_k1"},
      {"kernel", {{"family", "gaussian"}, {"length_scale", 1.0}}},
      {"integrator", {{"method", "implicit_midpoint"}, {"dt", 0.01}, {"t_end", 10.0}, {"observer_stride", 10}}},
      {"initial",
       {{"positions", {{-1.25, 0.0}, {1.25, 0.0}}},
        {"momenta", {{0.0, 0.0}, {0.0, 0.0}}},
        {"frame_momenta", {spin, spin}}}},
  };

  // Opposite blobs of strength 2 pi one unit apart: translation speed 1.
  p["vortex_pair_translate"] = {
      {"name", "vortex_pair_translate"},
      {"method", "vortex_blob"},
      {"vortex", {{"blob_width", 0.1}}},
      {"integrator", {{"method", "rk4"}, {"dt", 0.001}, {"t_end", 1.0}, {"observer_stride", 10}}},
      {"initial", {{"positions", {{-0.5, 0.0}, {0.5, 0.0}}}, {"strengths", {2.0 * pi, -2.0 * pi}}}},
  };

  // Equal blobs one unit apart: rotation period 2 pi^2 d^2 / Gamma = pi.
  p["corotating_blobs"] = {
      {"name", "corotating_blobs"},
      {"method", "vortex_blob"},
      {"vortex", {{"blob_width", 0.1}}},
      {"integrator", {{"method", "rk4"}, {"dt", 0.001}, {"t_end", 2.0 * pi}, {"observer_stride", 10}}},
      {"initial", {{"positions", {{-0.5, 0.0}, {0.5, 0.0}}}, {"strengths", {2.0 * pi, 2.0 * pi}}}},
  };

  p["spectral_torus_4"] = {
      {"name", "spectral_torus_4"},
      {"method", "spectral_k0"},
      {"spectral", {{"box_length", 2.0 * pi}, {"cutoff", 3}}},
      {"integrator", {{"method", "implicit_midpoint"}, {"dt", 0.01}, {"t_end", 5.0}, {"observer_stride", 10}}},
      {"initial",
       {{"positions", {{1.0, 1.0}, {4.0, 1.5}, {2.5, 4.0}, {5.0, 5.0}}},
        {"velocities", {{0.5, 0.0}, {0.0, 0.5}, {-0.5, 0.0}, {0.0, -0.5}}}}},
  };
  return p;
}

const std::map<std::string, json>& presets() {
  static const std::map<std::string, json> table = build_presets();
  return table;
}

// ---- sections ------------------------------------------------------------

void parse_kernel(Section s, Scenario& sc, Errors& errors) {
  if (auto f = s.string("family")) sc.kernel_family = *f;
  if (auto l = s.number("length_scale")) sc.length_scale = *l;
  if (auto j = s.number("jitter")) sc.jitter = *j;
  s.finish();
  if (sc.kernel_family != "gaussian" && sc.kernel_family != "exponential") {
    errors.add(s.key("family"), "unknown kernel family '" + sc.kernel_family + "' (expected gaussian or exponential)");
  } else if (sc.method == Method::JetK1 && sc.kernel_family != "gaussian") {
    errors.add(s.key("family"), "jet_k1 needs a kernel smooth at the origin (gaussian)");
  }
  if (!(sc.length_scale > 0.0) || !std::isfinite(sc.length_scale)) {
    errors.add(s.key("length_scale"), "must be positive");
  }
  if (!(sc.jitter >= 0.0)) errors.add(s.key("jitter"), "must be nonnegative");
}

void parse_integrator(Section s, Scenario& sc, Errors& errors) {
  IntegratorConfig& c = sc.integrator;
  if (auto m = s.string("method")) {
    try {
      c.method = integrator_from_name(*m);
    } catch (const ConfigError& e) {
      errors.add(s.key("method"), e.what());
    }
  }
  if (auto v = s.number("dt")) c.dt = *v;
  if (auto v = s.number("t_end")) c.t_end = *v;
  if (auto v = s.integer("observer_stride")) c.observer_stride = static_cast<int>(*v);
  if (auto v = s.number("newton_tol")) c.newton_tol = *v;
  if (auto v = s.integer("newton_max_iter")) c.newton_max_iter = static_cast<int>(*v);
  if (auto v = s.number("stop_on_monitor")) c.stop_on_monitor = *v;
  s.finish();
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) errors.add(s.key("dt"), "must be positive");
  if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) errors.add(s.key("t_end"), "must be nonnegative");
  if (c.observer_stride < 1) errors.add(s.key("observer_stride"), "must be at least 1");
  if (!(c.newton_tol > 0.0)) errors.add(s.key("newton_tol"), "must be positive");
  if (c.newton_max_iter < 1) errors.add(s.key("newton_max_iter"), "must be at least 1");
  if (c.stop_on_monitor && !(*c.stop_on_monitor >= 0.0)) {
    errors.add(s.key("stop_on_monitor"), "must be nonnegative");
  }
}

void parse_outputs(Section s, Scenario& sc, Errors& errors) {
  OutputConfig& o = sc.outputs;
  if (auto v = s.string("directory")) o.directory = *v;
  if (auto v = s.string("trajectory")) o.trajectory = *v;
  if (auto v = s.string("diagnostics")) o.diagnostics = *v;
  Section f = s.sub("field");
  if (f.present()) {
    FieldOutput fo;
    if (const json* g = f.raw("grid")) {
      try {
        if (g->is_string()) {
          fo.grid = FieldGrid::parse(g->get<std::string>());
        } else {
          auto v = parse_vector(*g, f.key("grid"), errors);
          if (v && v->size() == 6) {
            std::ostringstream spec;
            spec.precision(17);
            for (int i = 0; i < 6; ++i) spec << (i ? "," : "") << (*v)(i);
            fo.grid = FieldGrid::parse(spec.str());
          } else if (v) {
            errors.add(f.key("grid"), "expected [nx, ny, xmin, xmax, ymin, ymax]");
          }
        }
      } catch (const ConfigError& e) {
        errors.add(f.key("grid"), e.what());
      }
    } else {
      errors.add(f.key("grid"), "required");
    }
    if (auto z = f.number("z")) fo.grid.z = *z;
    if (const json* t = f.raw("times")) {
      if (auto v = parse_vector(*t, f.key("times"), errors)) fo.times.assign(v->begin(), v->end());
    } else {
      errors.add(f.key("times"), "required");
    }
    if (auto p = f.string("prefix")) fo.prefix = *p;
    f.finish();
    o.field = fo;
  }
  s.finish();
}

void parse_diagnostics(Section s, Scenario& sc, Errors& errors) {
  DiagnosticsConfig& d = sc.diagnostics;
  if (auto v = s.boolean("enabled")) d.enabled = *v;
  if (auto v = s.number("circulation_radius")) d.circulation_radius = *v;
  if (auto v = s.integer("circulation_nodes")) d.circulation_nodes = static_cast<int>(*v);
  s.finish();
  if (!(d.circulation_radius > 0.0)) errors.add(s.key("circulation_radius"), "must be positive");
  if (d.circulation_nodes < 16) errors.add(s.key("circulation_nodes"), "must be at least 16");
}

void random_initial(Section r, Scenario& sc, Errors& errors) {
  const auto count = r.integer("count");
  const auto dim = r.integer("dim");
  const double extent = r.number("extent").value_or(4.0);
  const double min_sep = r.number("min_separation").value_or(0.5);
  const double p_scale = r.number("momentum_scale").value_or(1.0);
  const double mu_scale = r.number("frame_momentum_scale").value_or(0.0);
  r.finish();
  if (!count || *count < 1) errors.add(r.key("count"), "required positive integer");
  if (!dim || *dim < 1 || *dim > 3) errors.add(r.key("dim"), "required, 1, 2 or 3");
  if (!(extent > 0.0)) errors.add(r.key("extent"), "must be positive");
  if (!(min_sep >= 0.0)) errors.add(r.key("min_separation"), "must be nonnegative");
  if (!errors.list.empty()) return;

  const int n = static_cast<int>(*count), d = static_cast<int>(*dim);
  std::mt19937_64 rng(sc.seed);
  std::uniform_real_distribution<double> uni(0.0, extent);
  std::normal_distribution<double> normal(0.0, 1.0);
  PointArray x(n, d);
  int placed = 0;
  for (long attempts = 0; placed < n; ++attempts) {
    if (attempts > 100000) {
      errors.add(r.key("extent"), "too small to place the particles at the requested separation");
      return;
    }
    Vec c(d);
    for (int a = 0; a < d; ++a) c(a) = uni(rng);
    bool ok = true;
    for (int j = 0; j < placed && ok; ++j) ok = (x.row(j).transpose() - c).norm() >= min_sep;
    if (ok) x.row(placed++) = c.transpose();
  }
  PointArray p(n, d);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < d; ++a) p(i, a) = p_scale * normal(rng);
  sc.positions = x;
  sc.momenta = p;
  if (sc.method == Method::JetK1) {
    sc.frames.assign(n, Mat::Identity(d, d));
    sc.frame_momenta.assign(n, Mat::Zero(d, d));
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) sc.frame_momenta[i](a, b) = mu_scale * normal(rng);
  }
}

void parse_initial(Section s, Scenario& sc, Errors& errors) {
  if (!s.present()) {
    errors.add("initial", "missing initial state");
    return;
  }
  const bool jets = sc.method == Method::JetK1;
  const bool vortex = sc.method == Method::VortexBlob;
  if (!jets) {
    s.forbid("frames", "only allowed for jet_k1");
    s.forbid("frame_momenta", "only allowed for jet_k1");
    s.forbid("frame_rates", "only allowed for jet_k1");
  }
  if (!vortex) s.forbid("strengths", "only allowed for vortex_blob");
  if (vortex) {
    s.forbid("momenta", "vortex_blob states carry strengths, not momenta");
    s.forbid("velocities", "vortex_blob states carry strengths, not momenta");
    s.forbid("random", "vortex_blob states need explicit positions and strengths");
  }

  Section random = s.sub("random");
  if (random.present() && !vortex) {
    if (s.has("positions") || s.has("momenta") || s.has("velocities")) {
      errors.add(random.key(""), "cannot be combined with positions, momenta or velocities");
    }
    s.raw("positions");
    s.raw("momenta");
    s.raw("velocities");
    s.raw("frames");
    s.raw("frame_momenta");
    s.raw("frame_rates");
    random_initial(random, sc, errors);
    s.finish();
    return;
  }

  const json* xj = s.raw("positions");
  if (!xj) {
    errors.add(s.key("positions"), "required");
    s.finish();
    return;
  }
  auto x = parse_matrix(*xj, s.key("positions"), errors);
  if (!x) {
    s.finish();
    return;
  }
  const auto n = x->rows(), d = x->cols();
  if (d < 1 || d > 3) errors.add(s.key("positions"), "dimension must be 1, 2 or 3");
  if ((sc.method == Method::SpectralK0 || vortex) && d != 2) {
    errors.add(s.key("positions"), to_string(sc.method) + " is two-dimensional");
  }
  sc.positions = *x;

  auto shaped = [&](const std::string& key, std::optional<Mat> m) -> std::optional<Mat> {
    if (m && (m->rows() != n || m->cols() != d)) {
      errors.add(s.key(key), "expected " + std::to_string(n) + " rows of length " + std::to_string(d));
      return std::nullopt;
    }
    return m;
  };

  if (vortex) {
    if (const json* g = s.raw("strengths")) {
      auto v = parse_vector(*g, s.key("strengths"), errors);
      if (v && v->size() != n) errors.add(s.key("strengths"), "need one strength per position");
      if (v) sc.strengths = *v;
    } else {
      errors.add(s.key("strengths"), "required");
    }
    s.finish();
    return;
  }

  const json* pj = s.raw("momenta");
  const json* vj = s.raw("velocities");
  std::optional<Mat> momenta, velocities;
  if (pj && vj) errors.add(s.key("momenta"), "give either momenta or velocities, not both");
  if (pj) momenta = shaped("momenta", parse_matrix(*pj, s.key("momenta"), errors));
  if (vj) velocities = shaped("velocities", parse_matrix(*vj, s.key("velocities"), errors));
  if (!pj && !vj) errors.add(s.key("momenta"), "required (or velocities)");

  std::optional<MatList> frames, frame_momenta, frame_rates;
  if (jets) {
    auto square_list = [&](const std::string& key) -> std::optional<MatList> {
      const json* j = s.raw(key);
      if (!j) return std::nullopt;
      auto list = parse_matrix_list(*j, s.key(key), errors);
      if (!list) return std::nullopt;
      if (static_cast<Eigen::Index>(list->size()) != n) {
        errors.add(s.key(key), "need one matrix per particle");
        return std::nullopt;
      }
      for (const Mat& m : *list) {
        if (m.rows() != d || m.cols() != d) {
          errors.add(s.key(key), "matrices must be " + std::to_string(d) + " x " + std::to_string(d));
          return std::nullopt;
        }
      }
      return list;
    };
    frames = square_list("frames");
    frame_momenta = square_list("frame_momenta");
    frame_rates = square_list("frame_rates");
    if (s.has("frame_momenta") && s.has("frame_rates")) {
      errors.add(s.key("frame_momenta"), "give either frame_momenta or frame_rates, not both");
    }
    if (momenta && frame_rates) errors.add(s.key("frame_rates"), "pairs with velocities, not momenta");
    if (velocities && frame_momenta) errors.add(s.key("frame_momenta"), "pairs with momenta, not velocities");
  }
  s.finish();
  if (!errors.list.empty()) return;

  sc.frames = frames.value_or(MatList(n, Mat::Identity(d, d)));
  if (momenta) {
    sc.momenta = *momenta;
    sc.frame_momenta = frame_momenta.value_or(MatList(jets ? n : 0, Mat::Zero(d, d)));
    return;
  }
  // Velocities are converted to momenta with the scenario's own solve.
  try {
    if (sc.method == Method::LandmarkK0) {
      sc.momenta = solve_k0(sc.kernel(), sc.positions, *velocities, {sc.jitter, false});
    } else if (jets) {
      const MatList rates = frame_rates.value_or(MatList(n, Mat::Zero(d, d)));
      const JetMomenta jm = solve_k1(sc.kernel(), sc.positions, *velocities, rates,
                                     {sc.jitter, sc.incompressible});
      sc.momenta = jm.momenta;
      sc.frame_momenta = jm.frame_momenta;
    } else {
      const SpectralBasis basis(sc.box_length, sc.cutoff);
      sc.momenta = spectral_momenta(basis, sc.positions, *velocities);
    }
  } catch (const Error& e) {
    errors.add(s.key("velocities"), e.what());
  }
}

void check_state(const Scenario& sc, Errors& errors) {
  try {
    switch (sc.method) {
      case Method::LandmarkK0:
      case Method::SpectralK0:
        ParticleState{sc.positions, sc.momenta}.validate();
        break;
      case Method::JetK1: {
        JetParticleState s{sc.positions, sc.frames, sc.momenta, sc.frame_momenta, sc.incompressible};
        s.validate();
        break;
      }
      case Method::VortexBlob:
        VortexState{sc.positions, sc.strengths, sc.blob_width}.validate();
        break;
    }
  } catch (const Error& e) {
    errors.add("initial", e.what());
  }
}

[[noreturn]] void throw_errors(const Errors& errors) {
  std::string msg = "invalid scenario (" + std::to_string(errors.list.size()) + " problem" +
                    (errors.list.size() == 1 ? "" : "s") + "):";
  for (const auto& e : errors.list) msg += "\n  " + e;
  throw ConfigError(msg);
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, doc] : presets()) names.push_back(name);
  return names;
}

json preset_json(const std::string& name) {
  auto it = presets().find(name);
  if (it == presets().end()) {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (available: " + known + ")");
  }
  return it->second;
}

Scenario preset_scenario(const std::string& name) { return parse_scenario(preset_json(name)); }

Scenario parse_scenario(const json& input) {
  if (!input.is_object()) throw ConfigError("invalid scenario: top level must be an object");
  Errors errors;
  json doc = input;
  if (doc.contains("preset")) {
    if (!doc["preset"].is_string()) throw ConfigError("invalid scenario:\n  preset: expected a string");
    json base = preset_json(doc["preset"].get<std::string>());
    doc.erase("preset");
    base.merge_patch(doc);
    doc = std::move(base);
  }

  Scenario sc;
  Section top(&doc, "", errors);
  sc.name = top.string("name").value_or("scenario");
  if (auto m = top.string("method")) {
    try {
      sc.method = method_from_name(*m);
    } catch (const ConfigError& e) {
      errors.add("method", e.what());
      throw_errors(errors);
    }
  } else {
    errors.add("method", "required");
    throw_errors(errors);
  }
  if (auto seed = top.integer("seed")) {
    if (*seed < 0) errors.add("seed", "must be nonnegative");
    else sc.seed = static_cast<std::uint64_t>(*seed);
  }

  const bool kernel_method = sc.method == Method::LandmarkK0 || sc.method == Method::JetK1;
  if (kernel_method) {
    parse_kernel(top.sub("kernel"), sc, errors);
  } else {
    top.forbid("kernel", "not used by " + to_string(sc.method));
  }
  if (sc.method == Method::JetK1) {
    if (auto v = top.boolean("incompressible")) sc.incompressible = *v;
  } else {
    top.forbid("incompressible", "only allowed for jet_k1");
  }
  if (sc.method == Method::SpectralK0) {
    Section s = top.sub("spectral");
    sc.box_length = s.number("box_length").value_or(2.0 * std::numbers::pi);
    sc.cutoff = static_cast<int>(s.integer("cutoff").value_or(3));
    s.finish();
    if (!(sc.box_length > 0.0)) errors.add("spectral.box_length", "must be positive");
    if (sc.cutoff < 1) errors.add("spectral.cutoff", "must be at least 1");
  } else {
    top.forbid("spectral", "only allowed for spectral_k0");
  }
  if (sc.method == Method::VortexBlob) {
    Section s = top.sub("vortex");
    if (auto w = s.number("blob_width")) sc.blob_width = *w;
    else errors.add("vortex.blob_width", "required");
    s.finish();
    if (s.present() && !(sc.blob_width > 0.0)) errors.add("vortex.blob_width", "must be positive");
  } else {
    top.forbid("vortex", "only allowed for vortex_blob");
  }

  parse_integrator(top.sub("integrator"), sc, errors);
  parse_outputs(top.sub("outputs"), sc, errors);
  parse_diagnostics(top.sub("diagnostics"), sc, errors);
  parse_initial(top.sub("initial"), sc, errors);
  top.finish();
  if (errors.list.empty()) check_state(sc, errors);
  if (errors.list.empty() && sc.outputs.field) {
    if (sc.dim() < 2) errors.add("outputs.field", "field samples need a 2D or 3D scenario");
    for (double t : sc.outputs.field->times) {
      if (!(t >= 0.0 && t <= sc.integrator.t_end)) {
        errors.add("outputs.field.times", "time " + std::to_string(t) + " is outside [0, t_end]");
      }
    }
  }
  if (!errors.list.empty()) throw_errors(errors);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read scenario file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_scenario(doc);
}

json to_json(const Scenario& sc) {
  json doc;
  doc["name"] = sc.name;
  doc["method"] = to_string(sc.method);
  doc["seed"] = sc.seed;
  if (sc.method == Method::LandmarkK0 || sc.method == Method::JetK1) {
    doc["kernel"] = {{"family", sc.kernel_family}, {"length_scale", sc.length_scale}, {"jitter", sc.jitter}};
  }
  if (sc.method == Method::JetK1) doc["incompressible"] = sc.incompressible;
  if (sc.method == Method::SpectralK0) doc["spectral"] = {{"box_length", sc.box_length}, {"cutoff", sc.cutoff}};
  if (sc.method == Method::VortexBlob) doc["vortex"] = {{"blob_width", sc.blob_width}};
  const IntegratorConfig& c = sc.integrator;
  doc["integrator"] = {{"method", to_string(c.method)},  {"dt", c.dt},
                       {"t_end", c.t_end},                {"observer_stride", c.observer_stride},
                       {"newton_tol", c.newton_tol},      {"newton_max_iter", c.newton_max_iter},
                       {"stop_on_monitor", c.stop_on_monitor ? json(*c.stop_on_monitor) : json(nullptr)}};
  json init;
  init["positions"] = to_json(Mat(sc.positions));
  if (sc.method == Method::VortexBlob) {
    init["strengths"] = to_json(sc.strengths);
  } else {
    init["momenta"] = to_json(Mat(sc.momenta));
  }
  if (sc.method == Method::JetK1) {
    init["frames"] = to_json(sc.frames);
    init["frame_momenta"] = to_json(sc.frame_momenta);
  }
  doc["initial"] = init;
  json out = {{"directory", sc.outputs.directory},
              {"trajectory", sc.outputs.trajectory},
              {"diagnostics", sc.outputs.diagnostics}};
  if (sc.outputs.field) {
    const FieldGrid& g = sc.outputs.field->grid;
    out["field"] = {{"grid", {g.nx, g.ny, g.xmin, g.xmax, g.ymin, g.ymax}},
                    {"z", g.z},
                    {"times", sc.outputs.field->times},
                    {"prefix", sc.outputs.field->prefix}};
  }
  doc["outputs"] = out;
  doc["diagnostics"] = {{"enabled", sc.diagnostics.enabled},
                        {"circulation_radius", sc.diagnostics.circulation_radius},
                        {"circulation_nodes", sc.diagnostics.circulation_nodes}};
  return doc;
}

std::unique_ptr<PhaseSystem> make_system(const Scenario& sc) {
  switch (sc.method) {
    case Method::LandmarkK0:
      return std::make_unique<LandmarkSystem>(sc.kernel(), sc.count(), sc.dim());
    case Method::JetK1:
      return std::make_unique<JetSystem>(sc.kernel(), sc.count(), sc.dim(), sc.incompressible);
    case Method::SpectralK0:
      return std::make_unique<SpectralSystem>(std::make_shared<SpectralBasis>(sc.box_length, sc.cutoff),
                                              sc.count());
    case Method::VortexBlob:
      return std::make_unique<VortexSystem>(sc.strengths, sc.blob_width);
  }
  throw ConfigError("unknown method");
}

Vec initial_state(const Scenario& sc, const PhaseSystem& system) {
  if (const auto* s = dynamic_cast<const LandmarkSystem*>(&system)) return s->pack({sc.positions, sc.momenta});
  if (const auto* s = dynamic_cast<const SpectralSystem*>(&system)) return s->pack({sc.positions, sc.momenta});
  if (const auto* s = dynamic_cast<const JetSystem*>(&system)) {
    return s->pack({sc.positions, sc.frames, sc.momenta, sc.frame_momenta, sc.incompressible});
  }
  if (const auto* s = dynamic_cast<const VortexSystem*>(&system)) {
    return s->pack({sc.positions, sc.strengths, sc.blob_width});
  }
  throw ConfigError("system does not belong to a scenario method");
}

Scenario with_state(const Scenario& scenario, const PhaseSystem& system, const Vec& z) {
  Scenario sc = scenario;
  if (const auto* s = dynamic_cast<const LandmarkSystem*>(&system)) {
    const ParticleState st = s->unpack(z);
    sc.positions = st.positions;
    sc.momenta = st.momenta;
  } else if (const auto* s = dynamic_cast<const SpectralSystem*>(&system)) {
    const ParticleState st = s->unpack(z);
    sc.positions = st.positions;
    sc.momenta = st.momenta;
  } else if (const auto* s = dynamic_cast<const JetSystem*>(&system)) {
    const JetParticleState st = s->unpack(z);
    sc.positions = st.positions;
    sc.momenta = st.momenta;
    sc.frames = st.frames;
    sc.frame_momenta = st.frame_momenta;
  } else if (const auto* s = dynamic_cast<const VortexSystem*>(&system)) {
    sc.positions = s->unpack(z).positions;
  }
  return sc;
}

}  // namespace jetflow
