#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "jetflow/conserve.hpp"
#include "jetflow/integrate.hpp"
#include "test_support.hpp"

using namespace jetflow;

namespace {

JetParticleState random_jets(std::mt19937_64& rng, int n, int d) {
  JetParticleState s = JetParticleState::at_rest(
      test::random_positions(rng, n, d, test::roomy_extent(n, d, 0.8), 0.8));
  s.momenta = test::random_array(rng, n, d);
  for (int i = 0; i < n; ++i) {
    s.frames[i] = Mat::Identity(d, d) + 0.3 * test::random_matrix(rng, d);
    s.frame_momenta[i] = test::random_matrix(rng, d, 0.4);
  }
  return s;
}

// sum of spatial frame momenta, whose antisymmetric part enters the
// angular momentum.
Mat total_spin(const MatList& mus, int d) {
  Mat S = Mat::Zero(d, d);
  for (const Mat& m : mus) S += m;
  return S;
}

}  // namespace

TEST_CASE("noether examples") {
  PointArray x(2, 2), p(2, 2);
  x << 0.0, 0.0, 1.0, 0.0;
  p << 1.0, 0.0, 1.0, 0.0;
  const ParticleState s{x, p};
  CHECK(noether_linear(s)(0) == 2.0);
  CHECK(noether_linear(s)(1) == 0.0);
  CHECK(noether_angular(s)(0) == 0.0);

  PointArray x1(1, 2), p1(1, 2);
  x1 << 1.0, 0.0;
  p1 << 0.0, 1.0;
  CHECK(noether_angular(ParticleState{x1, p1})(0) == 1.0);

  PointArray x2(2, 2), p2(2, 2);
  x2 << 1.0, 0.0, -1.0, 0.0;
  p2 << 0.0, 1.0, 0.0, -1.0;
  CHECK(noether_angular(ParticleState{x2, p2})(0) == 2.0);
  CHECK(noether_linear(ParticleState{x2, p2}).norm() == 0.0);

  PointArray x3(1, 3), p3(1, 3);
  x3 << 1.0, 0.0, 0.0;
  p3 << 0.0, 1.0, 0.0;
  const Vec a3 = noether_angular(ParticleState{x3, p3});
  CHECK(a3.size() == 3);
  CHECK((a3 - Vec::Unit(3, 2)).norm() == 0.0);

  CHECK(noether_angular(ParticleState{PointArray::Zero(1, 1), PointArray::Ones(1, 1)}).size() == 0);

  // A spinning jet at the origin carries angular momentum from its frame.
  JetParticleState spin = JetParticleState::at_rest(PointArray::Zero(1, 2));
  spin.frame_momenta[0] = 0.5 * spin_generator();
  CHECK(std::abs(noether_angular(spin)(0)) == doctest::Approx(1.0));

  // D^T P for identity frames is the frame momentum itself.
  CHECK((noether_jet(spin, 0) - spin.frame_momenta[0]).norm() == 0.0);
}

TEST_CASE("momentum maps are stationary along the exact vector fields") {
  std::mt19937_64 rng(211);
  const auto g = RadialKernel::gaussian(1.0);
  for (int d = 2; d <= 3; ++d) {
    const ParticleState s{test::random_positions(rng, 5, d, 4.0, 0.6), test::random_array(rng, 5, d)};
    const LandmarkRates r = eom_k0(g, s);
    CHECK(noether_linear(ParticleState{s.positions, r.momenta}).norm() <= 1e-13);
    const Vec dL = noether_angular(ParticleState{r.positions, s.momenta}) +
                   noether_angular(ParticleState{s.positions, r.momenta});
    CHECK(dL.norm() <= 1e-12);

    const JetParticleState j = random_jets(rng, 4, d);
    const JetRates jr = eom_k1(g, j);
    CHECK(jr.momenta.colwise().sum().norm() <= 1e-12);
    JetParticleState a = j, b = j;
    a.positions = jr.positions;
    a.frame_momenta.assign(4, Mat::Zero(d, d));
    b.momenta = jr.momenta;
    b.frame_momenta = jr.frame_momenta;
    const Vec dLj = noether_angular(a) + noether_angular(b);
    CHECK(dLj.norm() <= 1e-11 * (1.0 + total_spin(j.frame_momenta, d).norm()));
  }

  // Translation on the torus shifts each Fourier pair by a rotation, so
  // total momentum is conserved there too.
  auto basis = std::make_shared<SpectralBasis>(2.0 * std::numbers::pi, 3);
  const SpectralSystem sp(basis, 4);
  const Vec z = sp.pack({test::random_positions(rng, 4, 2, 5.0, 0.6), test::random_array(rng, 4, 2)});
  const Vec f = sp.rhs(z);
  const ParticleState pdot = sp.unpack(f);
  CHECK(pdot.momenta.colwise().sum().norm() <= 1e-10 * (1.0 + f.norm()));
}

TEST_CASE("circulation quadrature") {
  const double omega = 1.7, eps = 0.05;
  Vec c(2);
  c << 0.3, -0.4;
  auto rigid = [&](const Vec& m) {
    Vec u(2);
    u << -omega * (m(1) - c(1)), omega * (m(0) - c(0));
    return u;
  };
  CHECK(std::abs(circulation(rigid, c, eps) - 2.0 * std::numbers::pi * eps * eps * omega) <= 1e-10);
  auto uniform = [](const Vec&) { return Vec::Ones(2); };
  CHECK(std::abs(circulation(uniform, c, eps)) <= 1e-15);

  CHECK_THROWS_AS(circulation(rigid, Vec::Zero(3), eps), ConstraintError);
  CHECK_THROWS_AS(circulation(rigid, c, 0.0), DomainError);
  CHECK_THROWS_AS(circulation(rigid, c, eps, 8), DomainError);

  // A spinning jet looks like a rigid rotation close to its centre.
  const auto g = RadialKernel::gaussian(1.0);
  JetParticleState spin = JetParticleState::at_rest(PointArray::Zero(1, 2));
  spin.frame_momenta[0] = 0.6 * spin_generator();
  const auto field = VelocityFieldView::kernel_k1(g, spin.positions, spin.momenta, spin.frame_momenta);
  const double rate = -2.0 * g.d1(0.0) * 0.6;
  const double r = 0.01;
  const double expected = 2.0 * std::numbers::pi * r * r * rate;
  CHECK(std::abs(circulation(field, Vec::Zero(2), r) - expected) <= 0.01 * std::abs(expected));
}

TEST_CASE("record is pure and reports the system energy") {
  std::mt19937_64 rng(223);
  const auto g = RadialKernel::gaussian(1.0);
  const JetSystem sys(g, 3, 2);
  const Vec z = sys.pack(random_jets(rng, 3, 2));
  const DiagnosticsRecord a = record(sys, z, 0.5);
  const DiagnosticsRecord b = record(sys, z, 0.5);
  CHECK(a.energy == b.energy);
  CHECK(a.energy == sys.energy(z));
  CHECK(a.monitor == b.monitor);
  CHECK(a.circulations == b.circulations);
  CHECK(a.circulations.size() == 3);
  CHECK((a.linear_momentum - b.linear_momentum).norm() == 0.0);
  CHECK(a.jet_momenta.size() == 3);
  CHECK(a.t == 0.5);

  const LandmarkSystem sys3(g, 3, 3);
  const Vec z3 = sys3.pack({test::random_positions(rng, 3, 3, 3.0, 0.5), test::random_array(rng, 3, 3)});
  const DiagnosticsRecord c = record(sys3, z3, 0.0);
  CHECK(c.circulations.empty());
  CHECK(c.angular_momentum.size() == 3);
  CHECK(c.jet_momenta.empty());
}

TEST_CASE("implicit midpoint keeps the quadratic momentum maps") {
  // Linear and angular momentum and D^T P are at most bilinear in the
  // canonical variables, so the midpoint rule keeps them to solver accuracy.
  std::mt19937_64 rng(227);
  const auto g = RadialKernel::gaussian(1.0);
  for (int d = 2; d <= 3; ++d) {
    const JetSystem sys(g, 3, d);
    const JetParticleState s0 = random_jets(rng, 3, d);
    IntegratorConfig cfg;
    cfg.dt = 0.02;
    cfg.t_end = 1.0;
    cfg.observer_stride = 10;
    const auto traj = integrate(sys, sys.pack(s0), cfg);
    const Vec z0 = traj.snapshots.front().state;
    const DiagnosticsRecord r0 = record(sys, z0, 0.0);
    const double e0 = r0.energy;
    for (const auto& snap : traj.snapshots) {
      const DiagnosticsRecord r = record(sys, snap.state, snap.t);
      CHECK((r.linear_momentum - r0.linear_momentum).norm() <= 1e-10);
      CHECK((r.angular_momentum - r0.angular_momentum).norm() <= 1e-10);
      for (int i = 0; i < 3; ++i) {
        CHECK((r.jet_momenta[i] - r0.jet_momenta[i]).norm() <= 1e-10);
      }
      CHECK(std::abs(r.energy - e0) <= 1e-3 * e0);
    }
  }
}
