#include "igabem/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "igabem/errors.hpp"
#include "igabem/nurbs_surface.hpp"
#include "igabem/oracle.hpp"
#include "igabem/quasi_interp.hpp"
#include "igabem/singular_kernel.hpp"
#include "igabem/spline_product.hpp"

namespace igabem {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

KnotVector random_knots(Rng& rng, int d, double a, double b, int interior, int max_mult) {
  std::vector<double> k(d + 1, a);
  for (int i = 0; i < interior; ++i) {
    const double x = uniform(rng, a + 0.05 * (b - a), b - 0.05 * (b - a));
    const int m = std::uniform_int_distribution<int>(1, max_mult)(rng);
    k.insert(k.end(), m, x);
  }
  k.insert(k.end(), d + 1, b);
  std::sort(k.begin(), k.end());
  return KnotVector(std::move(k), d);
}

std::vector<double> random_coeffs(Rng& rng, int n) {
  std::vector<double> c(n);
  for (double& x : c) x = uniform(rng, -1.0, 1.0);
  return c;
}

std::vector<CheckResult> check_moments(Rng& rng) {
  std::vector<CheckResult> out;
  const double closed = 2.0 * std::log(1.0 + std::sqrt(2.0));
  const double v = monomial_kernel_integral(0, 0, 1, 1.0, 0.0, 1.0, Rect{{0, 0}, {1, 1}}, {0, 0});
  out.push_back({"unit square 1/r closed form", std::abs(v - closed), 1e-12});

  double dev = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double E = uniform(rng, 0.5, 2.0), G = uniform(rng, 0.5, 2.0);
    const double F = uniform(rng, -0.4, 0.4) * std::sqrt(E * G);
    const Rect r{{uniform(rng, -1.0, -0.2), uniform(rng, -1.0, -0.2)}, {uniform(rng, 0.2, 1.0), uniform(rng, 0.2, 1.0)}};
    const Param s{uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3)};
    const int ell = 1 + trial % 3;
    const int a = std::uniform_int_distribution<int>(0, 3)(rng);
    const int b = std::max(0, 2 * ell - 2 - a) + std::uniform_int_distribution<int>(0, 2)(rng);
    const double got = monomial_kernel_integral(a, b, ell, E, F, G, r, s);
    const double ref = singular_integral_oracle(
        [&](Param t) {
          const double u = t[0] - s[0], w = t[1] - s[1];
          return std::pow(u, a) * std::pow(w, b) * std::pow(E * u * u + 2 * F * u * w + G * w * w, -(2.0 * ell - 1) / 2);
        },
        r, s, {}, {}, 1e-13);
    dev = std::max(dev, std::abs(got - ref) / std::max(1e-3, std::abs(ref)));
  }
  out.push_back({"monomial kernel integrals vs adaptive oracle", dev, 1e-8});

  // Modified moments on the saddle for a random product-like space around s.
  const auto screen = make_saddle_screen();
  dev = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const Param s{uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5)};
    const auto exp = build_expansion(screen, s, 1 + trial, 1.0);
    const double h = 0.3;
    const KnotVector k1 = random_knots(rng, 4, s[0] - uniform(rng, 0.1, h), s[0] + uniform(rng, 0.1, h), 2, 2);
    const KnotVector k2 = random_knots(rng, 4, s[1] - uniform(rng, 0.1, h), s[1] + uniform(rng, 0.1, h), 2, 2);
    const auto mu = modified_moments(exp, k1, k2);
    const Rect r{{k1.front(), k2.front()}, {k1.back(), k2.back()}};
    const auto b1 = k1.breakpoints(), b2 = k2.breakpoints();
    double scale = mu.cwiseAbs().maxCoeff();
    for (int i = 0; i < k1.dimension(); i += 2) {
      for (int j = 0; j < k2.dimension(); j += 2) {
        const auto f1 = unit_bspline(k1, i), f2 = unit_bspline(k2, j);
        const double ref = singular_integral_oracle(
            [&](Param t) {
              if (t[0] < f1.lower() || t[0] > f1.upper() || t[1] < f2.lower() || t[1] > f2.upper()) return 0.0;
              return eval_kf(exp, t) * f1.eval(t[0]) * f2.eval(t[1]);
            },
            r, s, b1, b2, 1e-12);
        dev = std::max(dev, std::abs(mu(i, j) - ref) / scale);
      }
    }
  }
  out.push_back({"modified moments vs adaptive oracle", dev, 1e-8});
  return out;
}

std::vector<CheckResult> check_qi(Rng& rng) {
  double dev1 = 0.0, dev2 = 0.0;
  for (int p = 0; p <= 4; ++p) {
    for (int n = p + 2; n <= 13; n += 3) {
      const double a = uniform(rng, -2, 0), b = a + uniform(rng, 0.5, 3);
      const QiOperator op(p, a, b, n);
      const auto c = random_coeffs(rng, p + 1);
      auto poly = [&](double t) {
        double s = 0.0;
        for (int k = p; k >= 0; --k) s = s * t + c[k];
        return s;
      };
      std::vector<double> samples(n);
      for (int i = 0; i < n; ++i) samples[i] = poly(op.node(i));
      const auto coeffs = op.apply(samples);
      for (int k = 0; k < 50; ++k) {
        const double t = uniform(rng, a, b);
        dev1 = std::max(dev1, std::abs(eval_spline(op.knots(), coeffs, t) - poly(t)));
      }
      const QiOperator op2(std::min(p + 2, 4), -1.0, 1.0, n + 3);
      Eigen::MatrixXd grid(n, n + 3);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n + 3; ++j) grid(i, j) = poly(op.node(i)) * op2.node(j) * op2.node(j);
      const auto s2 = apply_qi_2d(op, op2, grid);
      for (int k = 0; k < 30; ++k) {
        const Param t{uniform(rng, a, b), uniform(rng, -1, 1)};
        dev2 = std::max(dev2, std::abs(s2.eval(t) - poly(t[0]) * t[1] * t[1]));
      }
    }
  }
  return {{"univariate polynomial reproduction", dev1, 1e-12}, {"tensor polynomial reproduction", dev2, 1e-12}};
}

std::vector<CheckResult> check_product(Rng& rng) {
  double dev = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const int p = std::uniform_int_distribution<int>(0, 3)(rng);
    const int d = std::uniform_int_distribution<int>(0, 3)(rng);
    const KnotVector ka = random_knots(rng, p, 0.0, 1.0, 4, std::max(1, p));
    const KnotVector kb = random_knots(rng, d, 0.0, 1.0, 3, std::max(1, d));
    const Spline1D a{ka, random_coeffs(rng, ka.dimension())};
    const Spline1D b{kb, random_coeffs(rng, kb.dimension())};
    const auto c = multiply_1d(a, b);
    for (int k = 0; k < 200; ++k) {
      const double t = uniform(rng, 0.0, 1.0);
      const double ab = a.eval(t) * b.eval(t);
      dev = std::max(dev, std::abs(c.eval(t) - ab) / (1.0 + std::abs(ab)));
    }
  }
  return {{"pointwise product exactness", dev, 1e-12}};
}

std::vector<CheckResult> check_geometry(Rng& rng) {
  const auto torus = make_torus(3.0, 1.0);
  double dev = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Vec3 x = torus.point({uniform(rng, -3, 3), uniform(rng, -1, 1)});
    const double rr = std::hypot(x.x(), x.y()) - 3.0;
    dev = std::max(dev, std::abs(rr * rr + x.z() * x.z() - 1.0));
  }
  const auto screen = make_saddle_screen();
  double dev2 = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Param t{uniform(rng, -1, 1), uniform(rng, -1, 1)};
    const auto S = screen.eval(t, 1);
    const Vec3 ref(t[0], t[1], t[0] * t[0] - t[1] * t[1]);
    const double J = std::sqrt(1.0 + 4.0 * t[0] * t[0] + 4.0 * t[1] * t[1]);
    dev2 = std::max({dev2, (S.point() - ref).norm(), std::abs(S.jacobian - J)});
  }
  return {{"torus implicit equation residual", dev, 1e-12}, {"saddle point and area element", dev2, 1e-12}};
}

}  // namespace

std::vector<std::string> check_suites() { return {"moments", "qi", "product", "geometry"}; }

std::vector<CheckResult> run_check(const std::string& suite, std::uint64_t seed) {
  Rng rng(seed);
  if (suite == "moments") return check_moments(rng);
  if (suite == "qi") return check_qi(rng);
  if (suite == "product") return check_product(rng);
  if (suite == "geometry") return check_geometry(rng);
  throw ArgumentError("check: unknown suite '" + suite + "'");
}

}  // namespace igabem
