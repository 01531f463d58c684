#include <cmath>
#include <random>

#include "doctest.h"
#include "jetflow/errors.hpp"
#include "jetflow/interp.hpp"
#include "test_support.hpp"

using namespace jetflow;
using test::random_array;
using test::random_matrix;
using test::random_positions;
using test::random_vector;

namespace {

PointArray points(std::initializer_list<std::initializer_list<double>> rows) {
  PointArray a(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& r : rows) {
    int k = 0;
    for (double v : r) a(i, k++) = v;
    ++i;
  }
  return a;
}

Vec vec(std::initializer_list<double> v) {
  Vec out(v.size());
  int k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

template <class F>
Mat fd_jacobian(const F& f, const Vec& m, double h) {
  const auto d = m.size();
  const auto out = f(m).size();
  Mat J(out, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    Vec mp = m, mm = m;
    mp(c) += h;
    mm(c) -= h;
    J.col(c) = (f(mp) - f(mm)) / (2.0 * h);
  }
  return J;
}

MatList random_mats(std::mt19937_64& rng, int n, int d, double scale = 1.0) {
  MatList out;
  for (int i = 0; i < n; ++i) out.push_back(random_matrix(rng, d, scale));
  return out;
}

}  // namespace

TEST_CASE("solve_k0 examples") {
  const auto g = RadialKernel::gaussian(1.0);

  SUBCASE("single particle") {
    const PointArray p = solve_k0(g, points({{0.3, -2.0}}), points({{1.0, 0.0}}));
    CHECK(p(0, 0) == doctest::Approx(1.0));
    CHECK(p(0, 1) == doctest::Approx(0.0));
  }
  SUBCASE("decoupled pair") {
    const PointArray p = solve_k0(g, points({{0.0}, {10.0}}), points({{1.0}, {1.0}}));
    CHECK(std::abs(p(0, 0) - 1.0) <= 1e-9);
    CHECK(std::abs(p(1, 0) - 1.0) <= 1e-9);
  }
  SUBCASE("coupled pair against the 2x2 inverse") {
    const PointArray p = solve_k0(g, points({{0.0}, {1.0}}), points({{1.0}, {0.0}}));
    const double c = std::exp(-0.5);
    CHECK(p(0, 0) == doctest::Approx(1.0 / (1.0 - c * c)).epsilon(1e-13));
    CHECK(p(1, 0) == doctest::Approx(-c / (1.0 - c * c)).epsilon(1e-13));
    CHECK(p(0, 0) == doctest::Approx(1.5819767068693265).epsilon(1e-13));
    CHECK(p(1, 0) == doctest::Approx(-0.9595173756674719).epsilon(1e-13));
  }
}

TEST_CASE("solve_k0 rejects near-coincident particles") {
  const auto g = RadialKernel::gaussian(1.0);
  const PointArray x = points({{0.0, 0.0}, {3.0, 0.0}, {3.0, 1e-9}});
  try {
    solve_k0(g, x, PointArray::Ones(3, 2));
    FAIL("expected ConditioningError");
  } catch (const ConditioningError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("near-coincident") != std::string::npos);
    CHECK(msg.find("1, 2") != std::string::npos);
  }
  CHECK_THROWS_AS(solve_k0(g, points({{1.0, 1.0}, {1.0, 1.0}}), PointArray::Ones(2, 2)),
                  ConstraintError);
  // Jitter trades exactness for solvability.
  InterpOptions opt;
  opt.jitter = 1e-3;
  CHECK_NOTHROW(solve_k0(g, x, PointArray::Ones(3, 2), opt));
}

TEST_CASE("eval_field_k0 examples") {
  const auto g = RadialKernel::gaussian(1.0);
  const Vec u = eval_field_k0(g, points({{0.0, 0.0}}), points({{1.0, 0.0}}), vec({1.0, 0.0}));
  CHECK(u(0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(u(1) == 0.0);

  std::mt19937_64 rng(3);
  const PointArray x = random_positions(rng, 5, 2, 3.0, 0.3);
  const PointArray p = random_array(rng, 5, 2);
  const Vec far = vec({50.0, 40.0});
  CHECK(eval_field_k0(g, x, p, far).norm() <= 1e-30 * p.cwiseAbs().sum());
}

TEST_CASE("interpolation exactness k0, random states") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 3;
    const int n = 1 + static_cast<int>(rng() % 16);
    for (const auto& k : {RadialKernel::gaussian(1.0), RadialKernel::exponential(1.0)}) {
      const PointArray x = random_positions(rng, n, d, test::roomy_extent(n, d, 1.0), 1.0);
      const PointArray v = random_array(rng, n, d);
      const PointArray p = solve_k0(k, x, v);
      for (int i = 0; i < n; ++i) {
        const Vec ui = eval_field_k0(k, x, p, x.row(i).transpose());
        CHECK((ui - v.row(i).transpose()).norm() <= 1e-10 * (1.0 + v.cwiseAbs().maxCoeff()));
      }
    }
  }
}

TEST_CASE("eval_grad_k0") {
  const auto g = RadialKernel::gaussian(1.0);
  CHECK(eval_grad_k0(g, points({{1.0, 2.0}}), points({{3.0, -1.0}}), vec({1.0, 2.0})).norm() == 0.0);
  CHECK(eval_grad_k0(g, points({{1.0, 2.0}, {0.0, 0.0}}), PointArray::Zero(2, 2), vec({0.5, 0.1}))
            .norm() == 0.0);
  CHECK_THROWS_AS(eval_grad_k0(RadialKernel::exponential(1.0), points({{1.0, 2.0}}),
                               points({{1.0, 1.0}}), vec({1.0, 2.0})),
                  RegularityError);

  std::mt19937_64 rng(5);
  const PointArray x = random_positions(rng, 4, 3, 3.0, 0.4);
  const PointArray p = random_array(rng, 4, 3);
  for (int q = 0; q < 20; ++q) {
    const Vec m = random_vector(rng, 3, 1.5);
    const Mat fd = fd_jacobian([&](const Vec& y) { return eval_field_k0(g, x, p, y); }, m, 1e-5);
    const Mat an = eval_grad_k0(g, x, p, m);
    CHECK((an - fd).norm() <= 1e-6 * std::max(1.0, an.norm()));
  }
}

TEST_CASE("solve_k1 examples") {
  const auto g = RadialKernel::gaussian(1.0);
  const PointArray origin = points({{0.0, 0.0}});

  SUBCASE("single spinning particle") {
    const double omega = 0.7;
    const Mat nu = omega * spin_generator();
    const JetMomenta sol = solve_k1(g, origin, PointArray::Zero(1, 2), {nu});
    CHECK(sol.momenta.norm() <= 1e-15);
    // Single-particle block: nu = -2 phi'(0) mu.
    const Mat expected = nu / (-2.0 * g.d1(0.0));
    CHECK((sol.frame_momenta[0] - expected).norm() <= 1e-14);
    const Mat grad = eval_grad_k1(g, origin, sol.momenta, sol.frame_momenta, Vec::Zero(2));
    CHECK((grad - nu).norm() <= 1e-10);
  }
  SUBCASE("single translating particle") {
    const JetMomenta sol = solve_k1(g, origin, points({{1.0, 0.0}}), {Mat::Zero(2, 2)});
    CHECK(sol.frame_momenta[0].norm() <= 1e-15);
    CHECK(sol.momenta(0, 0) == doctest::Approx(1.0));
    CHECK(sol.momenta(0, 1) == doctest::Approx(0.0));
  }
  SUBCASE("errors") {
    CHECK_THROWS_WITH_AS(solve_k1(RadialKernel::exponential(1.0), origin, points({{1.0, 0.0}}),
                                  {Mat::Zero(2, 2)}),
                         doctest::Contains("insufficient kernel regularity for k=1"), RegularityError);
    InterpOptions opt;
    opt.incompressible = true;
    CHECK_THROWS_AS(solve_k1(g, origin, points({{1.0, 0.0}}), {Mat::Identity(2, 2)}, opt),
                    ConstraintError);
    CHECK_NOTHROW(solve_k1(g, origin, points({{1.0, 0.0}}), {spin_generator()}, opt));
    CHECK_THROWS_AS(solve_k1(g, points({{0.0, 0.0}, {1e-7, 0.0}}), PointArray::Zero(2, 2),
                             {Mat::Zero(2, 2), Mat::Zero(2, 2)}),
                    ConditioningError);
  }
}

TEST_CASE("gram_k1 is symmetric") {
  std::mt19937_64 rng(9);
  const PointArray x = random_positions(rng, 5, 3, 3.0, 0.5);
  const Mat G = gram_k1(RadialKernel::gaussian(1.0), x);
  CHECK((G - G.transpose()).norm() <= 1e-15 * G.norm());
}

TEST_CASE("interpolation exactness k1, random states") {
  std::mt19937_64 rng(17);
  const auto g = RadialKernel::gaussian(1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 3;
    const int n = 1 + static_cast<int>(rng() % 10);
    const PointArray x = random_positions(rng, n, d, test::roomy_extent(n, d, 1.0), 1.0);
    const PointArray v = random_array(rng, n, d);
    const MatList nu = random_mats(rng, n, d);
    const JetMomenta sol = solve_k1(g, x, v, nu);
    const JetVelocities back = apply_gram_k1(g, x, sol.momenta, sol.frame_momenta);
    double nu_scale = 0.0;
    for (const auto& m : nu) nu_scale = std::max(nu_scale, m.norm());
    for (int i = 0; i < n; ++i) {
      CHECK((back.velocities.row(i) - v.row(i)).norm() <= 1e-10 * (1.0 + v.cwiseAbs().maxCoeff()));
      CHECK((back.frame_rates[i] - nu[i]).norm() <= 1e-9 * (1.0 + nu_scale));
    }
  }
}

TEST_CASE("k1 reduces to k0") {
  std::mt19937_64 rng(23);
  const auto g = RadialKernel::gaussian(1.0);
  const PointArray x = random_positions(rng, 6, 2, 4.0, 0.5);
  const PointArray p = random_array(rng, 6, 2);
  const MatList zero(6, Mat::Zero(2, 2));
  for (int q = 0; q < 20; ++q) {
    const Vec m = random_vector(rng, 2, 2.0);
    CHECK((eval_field_k1(g, x, p, zero, m) - eval_field_k0(g, x, p, m)).norm() <= 1e-12);
  }

  // nu = 0 on particles 10 sigma apart.
  PointArray far(4, 3);
  far << 0, 0, 0, 10, 0, 0, 0, 10, 0, 0, 0, 10;
  const PointArray v = random_array(rng, 4, 3);
  const JetMomenta sol = solve_k1(g, far, v, MatList(4, Mat::Zero(3, 3)));
  const PointArray p0 = solve_k0(g, far, v);
  for (int i = 0; i < 4; ++i) CHECK(sol.frame_momenta[i].norm() <= 1e-9);
  CHECK((sol.momenta - p0).norm() <= 1e-9);
}

TEST_CASE("k1 field derivatives") {
  std::mt19937_64 rng(29);
  const auto g = RadialKernel::gaussian(0.9);

  // Spin-only particle does not translate its own position.
  CHECK(eval_field_k1(g, points({{0.0, 0.0}}), PointArray::Zero(1, 2), {spin_generator()},
                      Vec::Zero(2))
            .norm() == 0.0);

  for (int d = 1; d <= 3; ++d) {
    const PointArray x = random_positions(rng, 4, d, 3.0, 0.5);
    const PointArray p = random_array(rng, 4, d);
    const MatList mu = random_mats(rng, 4, d);
    for (int q = 0; q < 10; ++q) {
      const Vec m = random_vector(rng, d, 1.5);
      const Mat grad = eval_grad_k1(g, x, p, mu, m);
      const Mat fd = fd_jacobian([&](const Vec& y) { return eval_field_k1(g, x, p, mu, y); }, m, 1e-5);
      CHECK((grad - fd).norm() <= 1e-6 * std::max(1.0, grad.norm()));

      const Hessian H = eval_hessian_k1(g, x, p, mu, m);
      for (int a = 0; a < d; ++a) {
        CHECK((H[a] - H[a].transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, H[a].norm()));
        const Mat fdh = fd_jacobian(
            [&](const Vec& y) -> Vec { return eval_grad_k1(g, x, p, mu, y).row(a).transpose(); }, m, 1e-5);
        CHECK((H[a] - fdh).norm() <= 1e-5 * std::max(1.0, H[a].norm()));
      }
    }
  }
}

TEST_CASE("translation and rotation equivariance") {
  std::mt19937_64 rng(31);
  const auto g = RadialKernel::gaussian(1.0);
  for (int d = 2; d <= 3; ++d) {
    const PointArray x = random_positions(rng, 5, d, 3.0, 0.5);
    const PointArray p = random_array(rng, 5, d);
    const MatList mu = random_mats(rng, 5, d);
    const Vec m = random_vector(rng, d);
    const Vec shift = random_vector(rng, d, 3.0);
    const Mat R = test::random_rotation(rng, d);

    const PointArray xs = x.rowwise() + shift.transpose();
    CHECK((eval_field_k0(g, xs, p, m + shift) - eval_field_k0(g, x, p, m)).norm() <= 1e-12);
    CHECK((eval_field_k1(g, xs, p, mu, m + shift) - eval_field_k1(g, x, p, mu, m)).norm() <= 1e-12);

    const PointArray xr = x * R.transpose();
    const PointArray pr = p * R.transpose();
    MatList mur;
    for (const auto& a : mu) mur.push_back(R * a * R.transpose());
    const Vec u0 = eval_field_k0(g, x, p, m);
    const Vec u1 = eval_field_k1(g, x, p, mu, m);
    CHECK((eval_field_k0(g, xr, pr, R * m) - R * u0).norm() <= 1e-12 * (1.0 + u0.norm()));
    CHECK((eval_field_k1(g, xr, pr, mur, R * m) - R * u1).norm() <= 1e-12 * (1.0 + u1.norm()));
  }
}
