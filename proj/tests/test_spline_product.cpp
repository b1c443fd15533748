#include <cmath>
#include <random>

#include "doctest.h"
#include "igabem/errors.hpp"
#include "igabem/oracle.hpp"
#include "igabem/spline_product.hpp"

using namespace igabem;

namespace {

Spline1D random_spline(std::mt19937_64& rng, const KnotVector& kv) {
  std::normal_distribution<double> N;
  Spline1D s{kv, {}};
  for (int i = 0; i < kv.dimension(); ++i) s.coeffs.push_back(N(rng));
  return s;
}

}  // namespace

TEST_CASE("product with the constant one") {
  std::mt19937_64 rng(1);
  const auto s1 = random_spline(rng, KnotVector({0, 0, 0, 0.3, 0.6, 0.6, 1, 1, 1}, 2));
  const Spline1D one{KnotVector({0, 1}, 0), {1.0}};
  const auto p = multiply_1d(s1, one);
  CHECK(p.knots.degree() == 2);
  for (int n = 0; n <= 100; ++n) {
    const double t = n / 100.0;
    CHECK(std::abs(p.eval(t) - s1.eval(t)) <= 1e-14);
  }
}

TEST_CASE("t times t in Bernstein form") {
  const Spline1D t{KnotVector({0, 0, 1, 1}, 1), {0.0, 1.0}};
  const auto p = multiply_1d(t, t);
  REQUIRE(p.knots.degree() == 2);
  REQUIRE(p.coeffs.size() == 3);
  CHECK(std::abs(p.coeffs[0]) <= 1e-15);
  CHECK(std::abs(p.coeffs[1]) <= 1e-15);
  CHECK(p.coeffs[2] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("random products agree pointwise") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-1.0, 2.0);
  const KnotVector ka({-1, -1, -1, -0.2, 0.5, 0.5, 1.1, 2, 2, 2}, 2);
  const KnotVector kb({-1, -1, -1, 0.0, 0.5, 1.5, 2, 2, 2}, 2);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_spline(rng, ka);
    const auto b = random_spline(rng, kb);
    const auto p = multiply_1d(a, b);
    CHECK(p.knots.degree() == 4);
    for (int n = 0; n < 200; ++n) {
      const double t = U(rng);
      CHECK(std::abs(p.eval(t) - a.eval(t) * b.eval(t)) <= 1e-13 * (1.0 + std::abs(a.eval(t) * b.eval(t))));
    }
  }
}

TEST_CASE("product knot multiplicities") {
  // C1 quadratic times C0 quadratic at 0.5: product is C0 and of degree 4, so multiplicity 4.
  const KnotVector a({0, 0, 0, 0.5, 1, 1, 1}, 2), b({0, 0, 0, 0.5, 0.5, 1, 1, 1}, 2);
  const auto k = product_knots(a, b);
  CHECK(k.degree() == 4);
  CHECK(k.multiplicity(0.5) == 4);
  CHECK(k.multiplicity(0.0) == 5);
  // Discontinuous factor keeps the product discontinuous.
  const auto c = product_knots(KnotVector({0, 0, 0, 0.5, 0.5, 0.5, 1, 1, 1}, 2), a);
  CHECK(c.multiplicity(0.5) == 5);
}

TEST_CASE("factors on different intervals") {
  const Spline1D a{KnotVector({0, 0, 1, 1}, 1), {0.0, 1.0}};
  const Spline1D b{KnotVector({0, 0, 2, 2}, 1), {0.0, 1.0}};
  CHECK_THROWS_AS(multiply_1d(a, b), ArgumentError);
}

TEST_CASE("restriction and unit B-splines") {
  const KnotVector kv({0, 0, 0, 0.25, 0.5, 0.75, 1, 1, 1}, 2);
  const auto b = unit_bspline(kv, 2);
  CHECK(b.lower() == 0.0);
  CHECK(b.upper() == 0.75);
  for (double t : {0.05, 0.3, 0.6, 0.74}) {
    const auto v = eval_basis(kv, t);
    const double ref = (2 >= v.first && 2 <= v.first + 2) ? v.values[2 - v.first] : 0.0;
    CHECK(b.eval(t) == doctest::Approx(ref).epsilon(1e-14));
  }
  const auto r = restrict_spline(b, 0.25, 0.5);
  for (double t : {0.25, 0.3, 0.41, 0.5}) CHECK(r.eval(t) == doctest::Approx(b.eval(t)).epsilon(1e-14));
  CHECK_THROWS_AS(restrict_spline(b, 0.5, 0.9), ArgumentError);
}

TEST_CASE("tensor products with a B-spline") {
  const KnotVector kv({0, 0, 0, 0.5, 1, 1, 1}, 2);
  const auto b1 = unit_bspline(kv, 1), b2 = unit_bspline(kv, 2);

  LocalSpline2D one{{KnotVector({0, 1}, 0), KnotVector({0.5, 1}, 0)}, Eigen::MatrixXd::Ones(1, 1)};
  const auto e = multiply_2d(one, b1, restrict_spline(b2, 0.5, 1.0));
  for (double s : {0.0, 0.2, 0.7, 1.0})
    for (double t : {0.5, 0.8, 1.0}) CHECK(e.eval({s, t}) == doctest::Approx(b1.eval(s) * b2.eval(t)).epsilon(1e-14));

  // Bilinear s on the support of b1 x b2.
  LocalSpline2D s{{KnotVector({0, 0, 1, 1}, 1), KnotVector({0.5, 0.5, 1, 1}, 1)}, Eigen::MatrixXd(2, 2)};
  s.coeffs << 1.0, -2.0, 0.5, 3.0;
  const auto b2r = restrict_spline(b2, 0.5, 1.0);
  const auto p = multiply_2d(s, b1, b2r);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int k = 0; k < 10; ++k) {
      const Param t{i / 9.0, 0.5 + 0.5 * k / 9.0};
      worst = std::max(worst, std::abs(p.eval(t) - s.eval(t) * b1.eval(t[0]) * b2r.eval(t[1])));
    }
  CHECK(worst <= 1e-13);

  const double exact = integrate(p);
  const double ref = adaptive_gauss_2d([&](Param t) { return s.eval(t) * b1.eval(t[0]) * b2r.eval(t[1]); },
                                       Rect{{0.0, 0.5}, {1.0, 1.0}}, 1e-14);
  CHECK(exact == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("exact spline integrals") {
  std::mt19937_64 rng(4);
  const auto s = random_spline(rng, KnotVector({0, 0, 0, 0, 0.4, 0.4, 1.3, 2, 2, 2, 2}, 3));
  double ref = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    // Composite Simpson on each of n panels; the spline is a cubic on each.
    const double a = 2.0 * i / n, b = 2.0 * (i + 1) / n;
    ref += (b - a) / 6.0 * (s.eval(a) + 4.0 * s.eval(0.5 * (a + b)) + s.eval(b));
  }
  CHECK(integrate(s) == doctest::Approx(ref).epsilon(1e-10));
}
