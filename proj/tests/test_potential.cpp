#include <cmath>
#include <limits>

#include "doctest.h"
#include "igabem/errors.hpp"
#include "igabem/potential.hpp"
#include "igabem/quasi_interp.hpp"

using namespace igabem;

namespace {

TensorSplineSpace screen_space(int level) {
  const KnotVector k({-1, -1, -1, 1, 1, 1}, 2);
  TensorSplineSpace s(k, k);
  for (int l = 0; l < level; ++l) s = refine_dyadic(s);
  return s;
}

// Coefficients of a bilinear function in a biquadratic space via its blossom (Greville values).
Eigen::VectorXd bilinear_coeffs(const TensorSplineSpace& space, double a, double b, double c, double d) {
  const auto g1 = greville_points(space.knots(0)), g2 = greville_points(space.knots(1));
  Eigen::VectorXd x(space.dimension());
  for (int i2 = 0; i2 < space.dimension(1); ++i2)
    for (int i1 = 0; i1 < space.dimension(0); ++i1)
      x(space.index(i1, i2)) = a + b * g1[i1] + c * g2[i2] + d * g1[i1] * g2[i2];
  return x;
}

}  // namespace

TEST_CASE("density errors vanish for spline densities") {
  const auto screen = make_saddle_screen();
  const auto space = screen_space(2);
  const auto x = bilinear_coeffs(space, 0.5, -1.0, 2.0, 0.25);
  auto psi = [](Param t) { return 0.5 - t[0] + 2.0 * t[1] + 0.25 * t[0] * t[1]; };
  const auto e = density_errors(psi, x, screen, space);
  CHECK(e.l2 <= 1e-13);
  CHECK(e.max_abs <= 1e-13);
}

TEST_CASE("density error is stable in the quadrature order") {
  const auto screen = make_saddle_screen();
  const auto space = screen_space(2);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(space.dimension(), 0.9);
  auto psi = [](Param t) { return std::sqrt(1.0 + 4.0 * t[0] * t[0] - 0.5 * t[1] * t[1]); };
  const double a = density_error_l2(psi, x, screen, space, 0);
  const double b = density_error_l2(psi, x, screen, space, 2);
  CHECK(a == doctest::Approx(b).epsilon(1e-8));
}

TEST_CASE("QI projections converge in the density norm") {
  const auto screen = make_saddle_screen();
  auto psi = [](Param t) { return std::exp(0.5 * t[0]) * std::cos(t[1]); };
  std::vector<double> err;
  for (int level = 1; level <= 4; ++level) {
    const auto space = screen_space(level);
    const int n = 2 * space.dimension(0) + 1;
    const QiOperator o1(2, -1.0, 1.0, n), o2(2, -1.0, 1.0, n);
    Eigen::MatrixXd f(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) f(a, b) = psi({o1.node(a), o2.node(b)});
    const auto proj = apply_qi_2d(o1, o2, f);
    // Value of the projection at Greville points gives a second, coarser spline.
    const auto g1 = greville_points(space.knots(0));
    Eigen::VectorXd x(space.dimension());
    for (int i2 = 0; i2 < space.dimension(1); ++i2)
      for (int i1 = 0; i1 < space.dimension(0); ++i1) x(space.index(i1, i2)) = proj.eval({g1[i1], g1[i2]});
    err.push_back(density_error_l2(psi, x, screen, space));
  }
  for (std::size_t k = 1; k < err.size(); ++k) CHECK(err[k] < 0.5 * err[k - 1]);
}

TEST_CASE("single-layer potential") {
  const auto screen = make_saddle_screen();
  const auto space = screen_space(1);
  const CubatureConfig cfg;
  const PotentialEvaluator pot(screen, space, cfg);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(space.dimension());
  CHECK(pot(zero, Vec3(0.0, 0.0, 0.3)) == 0.0);

  // Far field of a positive density behaves like total charge / (4 pi r).
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(space.dimension());
  const Vec3 dir = Vec3(1.0, 2.0, 2.0).normalized();
  const double u10 = pot(one, 10.0 * dir), u20 = pot(one, 20.0 * dir), u40 = pot(one, 40.0 * dir);
  CHECK(u20 / u10 == doctest::Approx(0.5).epsilon(0.1));
  CHECK(u40 / u20 == doctest::Approx(0.5).epsilon(0.1));

  CHECK_THROWS_AS(pot(one, Vec3(0.0, 0.0, 1e-3)), DomainError);
  CHECK_THROWS_AS(pot(Eigen::VectorXd::Ones(3), 10.0 * dir), ArgumentError);
}

TEST_CASE("sphere samples") {
  const auto s1 = sphere_sample(1);
  CHECK(s1.size() == 8);
  for (const auto& p : s1) CHECK(p.norm() == doctest::Approx(10.0).epsilon(1e-14));
  const auto s4 = sphere_sample(4);
  CHECK(s4.size() == 64);
  // Quasi-uniformity: nearest-neighbour distances within a factor two.
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t a = 0; a < s4.size(); ++a) {
    double nn = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < s4.size(); ++b)
      if (a != b) nn = std::min(nn, (s4[a] - s4[b]).norm());
    lo = std::min(lo, nn);
    hi = std::max(hi, nn);
  }
  CHECK(hi / lo <= 2.0);
  CHECK_THROWS_AS(sphere_sample(0), ArgumentError);

  const auto e = sphere_errors({3.0, -4.0}, 1.0);
  CHECK(e.max_abs == 4.0);
  CHECK(e.l2 == doctest::Approx(std::sqrt(12.5) * std::sqrt(4.0 * M_PI)));
}

TEST_CASE("experimental orders of convergence") {
  const auto o = eoc({1.0, 0.25, 1.0 / 16.0}, {1.0, 0.5, 0.25});
  REQUIRE(o.size() == 2);
  CHECK(o[0] == doctest::Approx(2.0));
  CHECK(o[1] == doctest::Approx(2.0));
  CHECK(eoc({1.0, 0.125}, {0.2, 0.1})[0] == doctest::Approx(3.0));
  CHECK(std::isinf(eoc({1.0, 0.0}, {1.0, 0.5})[0]));
  CHECK_THROWS_AS(eoc({1.0}, {1.0}), ArgumentError);
  CHECK_THROWS_AS(eoc({1.0, 0.5}, {1.0}), ArgumentError);
  CHECK_THROWS_AS(eoc({0.0, 0.5}, {1.0, 0.5}), ArgumentError);
}
