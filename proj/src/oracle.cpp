#include "igabem/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "igabem/errors.hpp"
#include "igabem/quadrature.hpp"
#include "igabem/singular_kernel.hpp"

namespace igabem {

namespace {

double gauss_rect(const Integrand2D& f, const Rect& r, int n) {
  const auto& g = gauss_legendre(n);
  const double m0 = 0.5 * (r.lo[0] + r.hi[0]), h0 = 0.5 * r.width(0);
  const double m1 = 0.5 * (r.lo[1] + r.hi[1]), h1 = 0.5 * r.width(1);
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += g.weights[i] * g.weights[j] * f({m0 + h0 * g.nodes[i], m1 + h1 * g.nodes[j]});
  return s * h0 * h1;
}

std::array<Rect, 4> quarter(const Rect& r) {
  const double mx = 0.5 * (r.lo[0] + r.hi[0]), my = 0.5 * (r.lo[1] + r.hi[1]);
  return {Rect{{r.lo[0], r.lo[1]}, {mx, my}}, Rect{{mx, r.lo[1]}, {r.hi[0], my}},
          Rect{{r.lo[0], my}, {mx, r.hi[1]}}, Rect{{mx, my}, {r.hi[0], r.hi[1]}}};
}

double adaptive_rec(const Integrand2D& f, const Rect& r, double whole, double tol, int depth) {
  const auto q = quarter(r);
  double parts[4], sum = 0.0;
  for (int k = 0; k < 4; ++k) sum += parts[k] = gauss_rect(f, q[k], 12);
  if (std::abs(sum - whole) <= std::max(tol, 1e-15 * std::abs(sum)) || depth <= 0) return sum;
  double out = 0.0;
  for (int k = 0; k < 4; ++k) out += adaptive_rec(f, q[k], parts[k], 0.5 * tol, depth - 1);
  return out;
}

std::vector<double> cuts(std::vector<double> b, double lo, double hi, double s) {
  b.push_back(lo);
  b.push_back(hi);
  if (s > lo && s < hi) b.push_back(s);
  std::sort(b.begin(), b.end());
  std::vector<double> out;
  for (double x : b) {
    if (x < lo || x > hi) continue;
    if (out.empty() || x > out.back() + 1e-14 * (hi - lo)) out.push_back(x);
  }
  return out;
}

// Triangle with vertex s and opposite side p1-p2, mapped from [0,1]^2 by
// (l, m) -> s + l ((1-m) p1 + m p2 - s); the Jacobian factor l removes 1/r.
double duffy_triangle(const Integrand2D& f, Param s, Param p1, Param p2, double tol) {
  const double area2 = std::abs((p1[0] - s[0]) * (p2[1] - s[1]) - (p1[1] - s[1]) * (p2[0] - s[0]));
  if (area2 == 0.0) return 0.0;
  Integrand2D g = [&](Param lm) {
    const double l = lm[0], m = lm[1];
    const double x = (1 - m) * p1[0] + m * p2[0], y = (1 - m) * p1[1] + m * p2[1];
    return f({s[0] + l * (x - s[0]), s[1] + l * (y - s[1])}) * l * area2;
  };
  return adaptive_gauss_2d(g, Rect{{0, 0}, {1, 1}}, tol);
}

}  // namespace

double adaptive_gauss_2d(const Integrand2D& f, const Rect& r, double abs_tol, int max_depth) {
  return adaptive_rec(f, r, gauss_rect(f, r, 12), abs_tol, max_depth);
}

double singular_integral_oracle(const Integrand2D& f, const Rect& r, Param s, std::vector<double> breaks1,
                                std::vector<double> breaks2, double rel_tol) {
  const auto c1 = cuts(std::move(breaks1), r.lo[0], r.hi[0], s[0]);
  const auto c2 = cuts(std::move(breaks2), r.lo[1], r.hi[1], s[1]);
  // Rough magnitude for the absolute tolerance (Duffy-free low order is enough for that).
  double scale = 0.0;
  for (std::size_t i = 0; i + 1 < c1.size(); ++i)
    for (std::size_t j = 0; j + 1 < c2.size(); ++j)
      scale += std::abs(gauss_rect(f, Rect{{c1[i], c2[j]}, {c1[i + 1], c2[j + 1]}}, 7));
  const double tol = rel_tol * std::max(scale, 1e-300);
  const int ncell = static_cast<int>((c1.size() - 1) * (c2.size() - 1));
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < c1.size(); ++i) {
    for (std::size_t j = 0; j + 1 < c2.size(); ++j) {
      const Rect cell{{c1[i], c2[j]}, {c1[i + 1], c2[j + 1]}};
      if (cell.contains(s, 1e-14)) {
        // s is a corner of the cell (cuts pass through s): two Duffy triangles.
        Param corner[4] = {{cell.lo[0], cell.lo[1]}, {cell.hi[0], cell.lo[1]}, {cell.hi[0], cell.hi[1]},
                           {cell.lo[0], cell.hi[1]}};
        int k0 = 0;
        double best = 1e300;
        for (int k = 0; k < 4; ++k) {
          const double d = std::hypot(corner[k][0] - s[0], corner[k][1] - s[1]);
          if (d < best) best = d, k0 = k;
        }
        const Param& a = corner[(k0 + 1) % 4];
        const Param& b = corner[(k0 + 2) % 4];
        const Param& c = corner[(k0 + 3) % 4];
        total += duffy_triangle(f, s, a, b, tol / ncell) + duffy_triangle(f, s, b, c, tol / ncell);
      } else {
        total += adaptive_gauss_2d(f, cell, tol / ncell, 20);
      }
    }
  }
  return total;
}

double entry_oracle(const NurbsSurface& surface, const TensorSplineSpace& space, Param s, int j, double rel_tol) {
  const Rect supp = space.support(j);
  // Unwrap s toward the support in periodic directions.
  for (int k = 0; k < 2; ++k) {
    if (!surface.periodic(k)) continue;
    const double L = surface.period(k);
    const double c = 0.5 * (supp.lo[k] + supp.hi[k]);
    s[k] -= L * std::round((s[k] - c) / L);
  }
  const Vec3 xs = surface.point(surface.wrap(s));
  auto f = [&](Param t) {
    const auto S = surface.eval(t, 1);
    return laplace_kernel(xs, S.point()) * space.eval(j, t) * S.jacobian;
  };
  std::vector<double> b[2];
  for (int k = 0; k < 2; ++k) {
    for (double x : space.knots(k).breakpoints()) b[k].push_back(x);
    for (double x : surface.knots(k).breakpoints()) b[k].push_back(x);
  }
  return singular_integral_oracle(f, supp, s, b[0], b[1], rel_tol);
}

}  // namespace igabem
