#include "jetflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "jetflow/compare.hpp"
#include "jetflow/conserve.hpp"
#include "jetflow/errors.hpp"
#include "jetflow/output.hpp"
#include "jetflow/scenario.hpp"

namespace jetflow {

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

namespace {

constexpr double kPi = std::numbers::pi;

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

// ---- random states -------------------------------------------------------

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double normal() { return normal_(rng_); }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }

  PointArray normal_array(int n, int d) {
    PointArray a(n, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = normal();
    return a;
  }

  Mat normal_matrix(int d, double scale = 1.0) { return scale * normal_array(d, d); }

  // Uniform points in [0, extent)^d with a minimum pairwise separation.
  PointArray positions(int n, int d, double extent, double min_sep) {
    PointArray x(n, d);
    int placed = 0;
    for (long attempts = 0; placed < n; ++attempts) {
      if (attempts > 1000000) throw DomainError("cannot place random particles");
      Vec c(d);
      for (int a = 0; a < d; ++a) c(a) = uniform(0.0, extent);
      bool ok = true;
      for (int j = 0; j < placed && ok; ++j) ok = (x.row(j).transpose() - c).norm() >= min_sep;
      if (ok) x.row(placed++) = c.transpose();
    }
    return x;
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Box side that comfortably holds n particles at the given separation.
double roomy(int n, int d, double sep) { return 2.5 * sep * std::pow(n, 1.0 / d) + sep; }

double row_max(const PointArray& a) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) m = std::max(m, a.row(i).norm());
  return m;
}

// ---- conservation runs shared by the energy and Noether checks ------------

struct RunMeasure {
  std::string name;
  double energy_drift = 0.0;
  double linear_drift = 0.0;
  double angular_drift = 0.0;
  double jet_drift = 0.0;
  std::string error;
};

// Relative change with an absolute fallback when the reference is zero.
double rel_change(double now, double ref) {
  return ref != 0.0 ? std::abs(now - ref) / std::abs(ref) : std::abs(now - ref);
}

RunMeasure measure_run(const std::string& preset, double t_end) {
  RunMeasure m;
  m.name = preset;
  Scenario sc = preset_scenario(preset);
  sc.integrator.method = IntegratorMethod::ImplicitMidpoint;
  sc.integrator.dt = 1e-2;
  sc.integrator.t_end = t_end;
  sc.integrator.observer_stride = 1;
  const auto system = make_system(sc);
  const Vec z0 = initial_state(sc, *system);
  const DiagnosticsRecord r0 = record(*system, z0, 0.0);
  auto observe = [&](const PhaseSystem& sys, const Snapshot& snap) {
    const DiagnosticsRecord r = record(sys, snap.state, snap.t);
    m.energy_drift = std::max(m.energy_drift, rel_change(r.energy, r0.energy));
    m.linear_drift = std::max(m.linear_drift, (r.linear_momentum - r0.linear_momentum).lpNorm<Eigen::Infinity>());
    for (Eigen::Index k = 0; k < r.angular_momentum.size(); ++k) {
      m.angular_drift = std::max(m.angular_drift, rel_change(r.angular_momentum(k), r0.angular_momentum(k)));
    }
    for (std::size_t i = 0; i < r.jet_momenta.size(); ++i) {
      const double ref = r0.jet_momenta[i].norm();
      const double diff = (r.jet_momenta[i] - r0.jet_momenta[i]).norm();
      m.jet_drift = std::max(m.jet_drift, ref > 0.0 ? diff / ref : diff);
    }
  };
  try {
    integrate(*system, z0, sc.integrator, {observe});
  } catch (const Error& e) {
    m.error = e.what();
  }
  return m;
}

const std::vector<RunMeasure>& conservation_runs() {
  static const std::vector<RunMeasure> runs = {measure_run("headon_pair_k0", 10.0),
                                               measure_run("corotating_jets", 10.0)};
  return runs;
}

// Least-squares slope of log(err) against log(dt).
double loglog_slope(const std::vector<double>& dts, const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(dts.size());
  for (std::size_t k = 0; k < dts.size(); ++k) {
    const double a = std::log(dts[k]), b = std::log(errs[k]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Trajectory run_preset(const Scenario& sc, const PhaseSystem& system, double dt, double t_end, int stride) {
  IntegratorConfig cfg = sc.integrator;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.observer_stride = stride;
  return integrate(system, initial_state(sc, system), cfg);
}

Vec centroid(const PointArray& x) { return x.colwise().mean().transpose(); }

// Translation speed of the vortex pair preset at time step dt.
double pair_speed(double dt) {
  const Scenario sc = preset_scenario("vortex_pair_translate");
  const auto sys = make_system(sc);
  const Trajectory tr = run_preset(sc, *sys, dt, sc.integrator.t_end, 1000000);
  const Vec c0 = centroid(sys->positions(tr.snapshots.front().state));
  const Vec c1 = centroid(sys->positions(tr.back().state));
  return (c1 - c0).norm() / tr.back().t;
}

// Time for the separation vector of the co-rotating blob preset to turn
// through 2 pi, interpolated linearly between steps.
double corotation_period(double dt) {
  const Scenario sc = preset_scenario("corotating_blobs");
  const auto sys = make_system(sc);
  const Trajectory tr = run_preset(sc, *sys, dt, sc.integrator.t_end, 1);
  double angle = 0.0;
  Vec prev;
  double prev_t = 0.0, prev_angle = 0.0;
  for (const Snapshot& s : tr.snapshots) {
    const PointArray x = sys->positions(s.state);
    const Vec sep = (x.row(1) - x.row(0)).transpose();
    if (prev.size()) {
      angle += std::atan2(prev(0) * sep(1) - prev(1) * sep(0), prev.dot(sep));
      if (angle >= 2.0 * kPi) {
        return prev_t + (s.t - prev_t) * (2.0 * kPi - prev_angle) / (angle - prev_angle);
      }
    }
    prev = sep;
    prev_t = s.t;
    prev_angle = angle;
  }
  return INFINITY;
}

}  // namespace

// 1. Interpolation exactness.
CheckResult check_interpolation(std::uint64_t seed) {
  CheckResult r{"interpolation exactness", false, ""};
  Sampler rng(seed);
  const auto g = RadialKernel::gaussian(1.0);
  double k0_err = 0.0, k1_vel = 0.0, k1_grad = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 2;
    const int n = 1 + trial % 16;
    const PointArray x = rng.positions(n, d, roomy(n, d, 1.0), 1.0);
    const PointArray v = rng.normal_array(n, d);
    MatList nu(n);
    for (auto& m : nu) m = rng.normal_matrix(d);
    const double vs = row_max(v);
    double ns = 0.0;
    for (const Mat& m : nu) ns = std::max(ns, m.norm());

    const PointArray p = solve_k0(g, x, v);
    const JetMomenta jm = solve_k1(g, x, v, nu);
    for (int i = 0; i < n; ++i) {
      const Vec xi = x.row(i).transpose();
      const Vec vi = v.row(i).transpose();
      k0_err = std::max(k0_err, (eval_field_k0(g, x, p, xi) - vi).norm() / vs);
      k1_vel = std::max(k1_vel, (eval_field_k1(g, x, jm.momenta, jm.frame_momenta, xi) - vi).norm() / vs);
      k1_grad = std::max(k1_grad, (eval_grad_k1(g, x, jm.momenta, jm.frame_momenta, xi) - nu[i]).norm() / ns);
    }
  }
  r.pass = k0_err <= 1e-10 && k1_vel <= 1e-10 && k1_grad <= 1e-9;
  r.detail = "100 states, N<=16, d in {2,3}: k0 velocity " + sci(k0_err) + " (<=1e-10), k1 velocity " +
             sci(k1_vel) + " (<=1e-10), k1 gradient " + sci(k1_grad) + " (<=1e-9)";
  return r;
}

// 2. Analytic momentum rates against central differences of H.
CheckResult check_gradients(std::uint64_t seed) {
  CheckResult r{"gradient oracle", false, ""};
  Sampler rng(seed);
  const auto g = RadialKernel::gaussian(1.0);
  const double h = 1e-5;
  double k0_err = 0.0, k1_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 2;
    const int n = 2 + trial % 5;
    const PointArray x = rng.positions(n, d, roomy(n, d, 0.8), 0.8);
    const PointArray p = rng.normal_array(n, d);
    JetParticleState jet = JetParticleState::at_rest(x);
    jet.momenta = p;
    for (int i = 0; i < n; ++i) {
      jet.frames[i] = Mat::Identity(d, d) + 0.3 * rng.normal_matrix(d);
      jet.frame_momenta[i] = rng.normal_matrix(d, 0.5);
    }

    const PointArray pdot0 = eom_k0(g, {x, p}).momenta;
    const PointArray pdot1 = eom_k1(g, jet).momenta;
    PointArray fd0(n, d), fd1(n, d);
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < d; ++a) {
        PointArray xp = x, xm = x;
        xp(i, a) += h;
        xm(i, a) -= h;
        fd0(i, a) = -(hamiltonian_k0(g, {xp, p}) - hamiltonian_k0(g, {xm, p})) / (2.0 * h);
        JetParticleState jp = jet, jmn = jet;
        jp.positions = xp;
        jmn.positions = xm;
        fd1(i, a) = -(hamiltonian_k1(g, jp) - hamiltonian_k1(g, jmn)) / (2.0 * h);
      }
    }
    k0_err = std::max(k0_err, (pdot0 - fd0).norm() / pdot0.norm());
    k1_err = std::max(k1_err, (pdot1 - fd1).norm() / pdot1.norm());
  }
  r.pass = k0_err <= 1e-6 && k1_err <= 1e-6;
  r.detail = "50 states, h=1e-5: k0 " + sci(k0_err) + ", k1 " + sci(k1_err) + " (<=1e-6)";
  return r;
}

// 3. Energy drift of the midpoint runs.
CheckResult check_energy() {
  CheckResult r{"energy conservation", true, ""};
  for (const RunMeasure& m : conservation_runs()) {
    if (!r.detail.empty()) r.detail += "; ";
    if (!m.error.empty()) {
      r.pass = false;
      r.detail += m.name + " failed: " + m.error;
      continue;
    }
    r.pass = r.pass && m.energy_drift <= 1e-6;
    r.detail += m.name + " " + sci(m.energy_drift);
  }
  r.detail = "midpoint dt=1e-2 t=10, relative drift (<=1e-6): " + r.detail;
  return r;
}

// 4. Momentum maps over the same runs.
CheckResult check_noether() {
  CheckResult r{"noether momenta", true, ""};
  for (const RunMeasure& m : conservation_runs()) {
    if (!r.detail.empty()) r.detail += "; ";
    if (!m.error.empty()) {
      r.pass = false;
      r.detail += m.name + " failed: " + m.error;
      continue;
    }
    r.pass = r.pass && m.linear_drift <= 1e-12 && m.angular_drift <= 1e-8 && m.jet_drift <= 1e-8;
    r.detail += m.name + " sum p " + sci(m.linear_drift) + ", angular " + sci(m.angular_drift);
    if (m.name == "corotating_jets") r.detail += ", D^T P " + sci(m.jet_drift);
  }
  r.detail += " (sum p <=1e-12 abs, angular <=1e-8 rel, D^T P <=1e-8 rel)";
  return r;
}

// 5. Circulation around each jet particle over t in [0, 5].
CheckResult check_circulation() {
  CheckResult r{"particle circulation", false, ""};
  Scenario sc = preset_scenario("corotating_jets");
  const auto sys = make_system(sc);
  const double eps = 0.01 * sys->length_scale();
  std::vector<double> c0;
  double worst = 0.0;
  auto observe = [&](const PhaseSystem& s, const Snapshot& snap) {
    const VelocityFieldView field = s.field(snap.state);
    const PointArray x = s.positions(snap.state);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double c = circulation(field, x.row(i).transpose(), eps) / (eps * eps);
      if (snap.step == 0) c0.push_back(c);
      else worst = std::max(worst, std::abs(c - c0[i]) / std::abs(c0[i]));
    }
  };
  IntegratorConfig cfg = sc.integrator;
  cfg.t_end = 5.0;
  cfg.observer_stride = 1;
  try {
    integrate(*sys, initial_state(sc, *sys), cfg, {observe});
  } catch (const Error& e) {
    r.detail = std::string("corotating_jets failed: ") + e.what();
    return r;
  }
  r.pass = worst <= 0.02;
  r.detail = "corotating_jets eps=0.01 sigma, max relative change of circulation/eps^2 " + fixed(worst) +
             " (<=0.02)";
  return r;
}

// 6. Curvature vanishes at the particles and is antisymmetric.
CheckResult check_curvature(std::uint64_t seed) {
  CheckResult r{"curvature codomain", false, ""};
  Sampler rng(seed);
  const auto g = RadialKernel::gaussian(1.0);
  double at_particles = 0.0, antisym = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 2;
    const int n = 2 + trial % 4;
    const PointArray x = rng.positions(n, d, roomy(n, d, 0.8), 0.8);
    const PointArray v = rng.normal_array(n, d);
    const PointArray w = rng.normal_array(n, d);
    // B is bilinear in the two inputs; its natural size is |v| |w| / sigma.
    const double scale = std::max(1.0, v.cwiseAbs().maxCoeff() * w.cwiseAbs().maxCoeff()) / g.length_scale();
    for (int k = 0; k < n; ++k) {
      at_particles = std::max(at_particles, curvature_value(g, x, v, w, x.row(k).transpose()).norm() / scale);
    }
    Vec m(d);
    for (int a = 0; a < d; ++a) m(a) = rng.uniform(0.0, roomy(n, d, 0.8));
    const Vec bvw = curvature_value(g, x, v, w, m);
    const Vec bwv = curvature_value(g, x, w, v, m);
    antisym = std::max(antisym, (bvw + bwv).norm() / std::max(bvw.norm(), 1e-300));
  }
  r.pass = at_particles <= 1e-8 && antisym <= 1e-14;
  r.detail = "20 inputs: max |B(x_k)|/scale " + sci(at_particles) + " (<=1e-8), antisymmetry " + sci(antisym) +
             " (<=1e-14 rel)";
  return r;
}

// 7. RK4 global order on the head-on pair.
CheckResult check_convergence() {
  CheckResult r{"integrator order", false, ""};
  Scenario sc = preset_scenario("headon_pair_k0");
  sc.integrator.method = IntegratorMethod::Rk4;
  const auto sys = make_system(sc);
  const double t_end = sc.integrator.t_end;
  const std::vector<double> dts = {1e-1, 5e-2, 2.5e-2};
  const Vec ref = run_preset(sc, *sys, dts.back() / 64.0, t_end, 1000000).back().state;
  std::vector<double> errs;
  for (double dt : dts) {
    errs.push_back((run_preset(sc, *sys, dt, t_end, 1000000).back().state - ref).lpNorm<Eigen::Infinity>());
  }
  const double slope = loglog_slope(dts, errs);
  r.pass = std::abs(slope - 4.0) <= 0.2;
  r.detail = "headon_pair_k0 to t=" + fixed(t_end, 1) + ", errors " + sci(errs[0]) + ", " + sci(errs[1]) + ", " +
             sci(errs[2]) + "; fitted RK4 slope " + fixed(slope, 3) + " (4.0 +- 0.2)";
  return r;
}

// 8. Vortex-blob physics against point-vortex formulas.
CheckResult check_vortex() {
  CheckResult r{"vortex blob physics", false, ""};
  const Scenario pair = preset_scenario("vortex_pair_translate");
  const double gamma = pair.strengths(0);
  const double d = (pair.positions.row(1) - pair.positions.row(0)).norm();
  const double speed = pair_speed(pair.integrator.dt);
  const double speed_ref = pair_speed(pair.integrator.dt / 10.0);
  const double speed_exact = gamma / (2.0 * kPi * d);
  const double speed_err = std::abs(speed - speed_exact) / speed_exact;
  const double speed_dt = std::abs(speed - speed_ref) / speed_exact;

  const Scenario co = preset_scenario("corotating_blobs");
  const double gco = co.strengths(0);
  const double dco = (co.positions.row(1) - co.positions.row(0)).norm();
  const double period = corotation_period(co.integrator.dt);
  const double period_ref = corotation_period(co.integrator.dt / 10.0);
  const double period_exact = 2.0 * kPi * kPi * dco * dco / gco;
  const double period_err = std::abs(period - period_exact) / period_exact;
  const double period_dt = std::abs(period - period_ref) / period_exact;

  // Invariants over 1000 RK4 steps of both presets.
  double inv_drift = 0.0;
  for (const Scenario* sc : {&pair, &co}) {
    const auto sys = make_system(*sc);
    const auto* vs = dynamic_cast<const VortexSystem*>(sys.get());
    const Trajectory tr = run_preset(*sc, *sys, sc->integrator.dt, 1000 * sc->integrator.dt, 1);
    const BlobInvariants i0 = blob_invariants(vs->unpack(tr.snapshots.front().state));
    for (const Snapshot& s : tr.snapshots) {
      const BlobInvariants inv = blob_invariants(vs->unpack(s.state));
      inv_drift = std::max({inv_drift, std::abs(inv.total_circulation - i0.total_circulation),
                            (inv.linear_impulse - i0.linear_impulse).lpNorm<Eigen::Infinity>(),
                            std::abs(inv.angular_impulse - i0.angular_impulse)});
    }
  }
  // The dt/10 reference must agree far better than the 1% bound.
  r.pass = speed_err <= 0.01 && period_err <= 0.01 && speed_dt <= 1e-3 && period_dt <= 1e-3 && inv_drift <= 1e-10;
  r.detail = "pair speed " + fixed(speed, 6) + " vs " + fixed(speed_exact, 6) + " (rel " + sci(speed_err) +
             ", dt/10 ref " + sci(speed_dt) + "); period " + fixed(period, 6) + " vs " + fixed(period_exact, 6) +
             " (rel " + sci(period_err) + ", dt/10 ref " + sci(period_dt) + "); invariant drift " + sci(inv_drift) +
             " (<=1e-10)";
  return r;
}

// 9. Spectral backend: matching, divergence, periodicity.
CheckResult check_spectral(std::uint64_t seed) {
  CheckResult r{"spectral backend", false, ""};
  Sampler rng(seed);
  const double L = 2.0 * kPi;
  double match = 0.0, div = 0.0, period = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int cutoff = 3 + trial % 3;
    const SpectralBasis basis(L, cutoff);
    const int n = 1 + trial % 6;
    const PointArray x = rng.positions(n, 2, L, 0.5);
    const PointArray v = rng.normal_array(n, 2);
    const Vec c = solve_spectral(basis, x, v);
    const double vs = row_max(v);
    for (int i = 0; i < n; ++i) {
      match = std::max(match, (basis.eval(c, x.row(i).transpose()) - v.row(i).transpose()).norm() / vs);
    }
    // 50 sample points spread over the trials (2 or 3 each).
    const int points = trial < 10 ? 3 : 2;
    const double h = 1e-5;
    for (int q = 0; q < points; ++q) {
      Vec m(2);
      m << rng.uniform(0.0, L), rng.uniform(0.0, L);
      const Vec ex = Vec::Unit(2, 0) * h, ey = Vec::Unit(2, 1) * h;
      const double d = (basis.eval(c, m + ex)(0) - basis.eval(c, m - ex)(0)) / (2.0 * h) +
                       (basis.eval(c, m + ey)(1) - basis.eval(c, m - ey)(1)) / (2.0 * h);
      div = std::max(div, std::abs(d));
      const Vec u = basis.eval(c, m);
      for (const Vec& shift : {Vec(Vec::Unit(2, 0) * L), Vec(Vec::Unit(2, 1) * L)}) {
        period = std::max(period, (basis.eval(c, m + shift) - u).norm() / std::max(1.0, u.norm()));
      }
    }
  }
  r.pass = match <= 1e-9 && div <= 1e-6 && period <= 1e-12;
  r.detail = "20 configurations: matching " + sci(match) + " (<=1e-9), divergence at 50 points " + sci(div) +
             " (<=1e-6), periodicity " + sci(period) + " (<=1e-12)";
  return r;
}

// 10. Blob dynamics against spin-only jets.
CheckResult check_comparison() {
  CheckResult r{"blob vs jet comparison", false, ""};
  IntegratorConfig cfg;
  cfg.method = IntegratorMethod::ImplicitMidpoint;
  cfg.dt = 1e-2;
  cfg.t_end = 5.0;

  VortexState single;
  single.positions = PointArray::Zero(1, 2);
  single.strengths = Vec::Constant(1, 2.0 * kPi);
  single.blob_width = 1.0;
  const BlobJetReport one = compare_with_jets(single, spin_jets_from_blobs(single), cfg, 1e-12);

  // The corotating_jets configuration seen as blobs: mu = J is Gamma = 2 pi.
  const Scenario jets = preset_scenario("corotating_jets");
  VortexState pair;
  pair.positions = jets.positions;
  pair.strengths = Vec::Constant(jets.count(), 2.0 * kPi);
  pair.blob_width = jets.length_scale;
  const BlobJetReport two = compare_with_jets(pair, spin_jets_from_blobs(pair), cfg, 1e-3);

  r.pass = one.max_discrepancy == 0.0 && two.sign_consistent;
  r.detail = "single blob discrepancy " + sci(one.max_discrepancy) + " (==0); pair swept angles blob " +
             fixed(two.blob_swept_angle[0], 3) + ", jet " + fixed(two.jet_swept_angle[0], 3) +
             (two.sign_consistent ? " (same sense)" : " (opposite sense)") + "; reported only: pair discrepancy " +
             fixed(two.max_discrepancy, 4) + ", max jet |p| " + fixed(two.max_jet_momentum, 4);
  return r;
}

std::vector<std::string> suite_names() {
  return {"interpolation", "gradients", "conservation", "curvature", "convergence", "vortex", "spectral", "comparison"};
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed) {
  SuiteReport report{name, {}};
  if (name == "all") {
    for (const auto& s : suite_names()) {
      const SuiteReport part = run_suite(s, seed);
      report.checks.insert(report.checks.end(), part.checks.begin(), part.checks.end());
    }
    return report;
  }
  const std::map<std::string, std::function<std::vector<CheckResult>()>> suites = {
      {"interpolation", [&] { return std::vector{check_interpolation(seed)}; }},
      {"gradients", [&] { return std::vector{check_gradients(seed)}; }},
      {"conservation", [&] { return std::vector{check_energy(), check_noether(), check_circulation()}; }},
      {"curvature", [&] { return std::vector{check_curvature(seed)}; }},
      {"convergence", [&] { return std::vector{check_convergence()}; }},
      {"vortex", [&] { return std::vector{check_vortex()}; }},
      {"spectral", [&] { return std::vector{check_spectral(seed)}; }},
      {"comparison", [&] { return std::vector{check_comparison()}; }},
  };
  auto it = suites.find(name);
  if (it == suites.end()) {
    std::string known = "all";
    for (const auto& s : suite_names()) known += ", " + s;
    throw ConfigError("unknown suite '" + name + "' (available: " + known + ")");
  }
  report.checks = it->second();
  return report;
}

void print_report(std::ostream& out, const SuiteReport& report) {
  for (const CheckResult& c : report.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  }
}

}  // namespace jetflow
