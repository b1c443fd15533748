#include "igabem/singular_kernel.hpp"

#include <algorithm>
#include <cmath>

#include "igabem/errors.hpp"
#include "igabem/quadrature.hpp"

namespace igabem {

double HomogeneousPoly::eval(double u, double v) const {
  // Horner in t = v/u is unstable near u = 0; plain powers are fine for degree <= 6.
  double s = 0.0, vp = 1.0;
  double up[8];
  up[0] = 1.0;
  for (int i = 1; i <= degree; ++i) up[i] = up[i - 1] * u;
  for (int i = 0; i <= degree; ++i) {
    s += c[i] * up[degree - i] * vp;
    vp *= v;
  }
  return s;
}

HomogeneousPoly operator*(const HomogeneousPoly& a, const HomogeneousPoly& b) {
  auto r = HomogeneousPoly::zero(a.degree + b.degree);
  for (int i = 0; i <= a.degree; ++i)
    for (int j = 0; j <= b.degree; ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

HomogeneousPoly operator+(const HomogeneousPoly& a, const HomogeneousPoly& b) {
  if (a.degree != b.degree) throw ArgumentError("homogeneous polynomials of different degree");
  auto r = a;
  for (int i = 0; i <= a.degree; ++i) r.c[i] += b.c[i];
  return r;
}

HomogeneousPoly operator*(double s, const HomogeneousPoly& a) {
  auto r = a;
  for (double& x : r.c) x *= s;
  return r;
}

namespace {

// Vector-valued homogeneous polynomial.
struct VecPoly {
  int degree;
  std::vector<Vec3> c;
};

HomogeneousPoly dot(const VecPoly& a, const VecPoly& b) {
  auto r = HomogeneousPoly::zero(a.degree + b.degree);
  for (int i = 0; i <= a.degree; ++i)
    for (int j = 0; j <= b.degree; ++j) r.c[i + j] += a.c[i].dot(b.c[j]);
  return r;
}

}  // namespace

void KernelExpansion::pieces(double u, double v, double out[3]) const {
  const double p = quadratic_form(u, v);
  const double ip = 1.0 / p;
  const double r1 = kInvFourPi / std::sqrt(p);
  out[0] = r1;
  out[1] = order >= 2 ? r1 * ip * p3.eval(u, v) : 0.0;
  out[2] = order >= 3 ? r1 * ip * ip * p6.eval(u, v) : 0.0;
}

KernelExpansion KernelExpansion::shifted(Param delta) const {
  KernelExpansion e = *this;
  e.source = {source[0] + delta[0], source[1] + delta[1]};
  return e;
}

KernelExpansion build_expansion(const NurbsSurface& surface, Param s, int n, double eta) {
  if (n < 1 || n > 3) throw ArgumentError("kernel expansion: number of terms must be 1, 2 or 3");
  if (eta < 0.0) throw ArgumentError("kernel expansion: eta must be nonnegative");
  const auto S = surface.eval(s, n);
  KernelExpansion e;
  e.source = s;
  e.point = S.point();
  e.order = n;
  e.eta = eta;
  e.E = S.du().squaredNorm();
  e.F = S.du().dot(S.dv());
  e.G = S.dv().squaredNorm();
  const double det = e.E * e.G - e.F * e.F;
  if (!(e.E > 0.0) || !(det > 1e-14 * e.E * e.G))
    throw GeometryError("kernel expansion: degenerate first fundamental form");
  if (n >= 2) {
    const VecPoly L{1, {S.partial(1, 0), S.partial(0, 1)}};
    const VecPoly Q{2, {0.5 * S.partial(2, 0), S.partial(1, 1), 0.5 * S.partial(0, 2)}};
    const auto LQ = dot(L, Q);
    e.p3 = -1.0 * LQ;
    if (n >= 3) {
      const VecPoly C{3, {S.partial(3, 0) / 6.0, 0.5 * S.partial(2, 1), 0.5 * S.partial(1, 2), S.partial(0, 3) / 6.0}};
      const auto D3 = 2.0 * LQ;
      const auto D4 = dot(Q, Q) + 2.0 * dot(L, C);
      const HomogeneousPoly P{2, {e.E, 2.0 * e.F, e.G}};
      e.p6 = (3.0 / 8.0) * (D3 * D3) + (-0.5) * (P * D4);
    }
  }
  return e;
}

double eval_kf(const KernelExpansion& exp, Param t) {
  const double u = t[0] - exp.source[0], v = t[1] - exp.source[1];
  if (u == 0.0 && v == 0.0) throw DomainError("reference kernel evaluated at its source");
  double k[3];
  exp.pieces(u, v, k);
  return k[0] + k[1] + k[2] + exp.effective_eta() * (u * u + v * v);
}

double eval_rho(const KernelExpansion& exp, Param t, const Vec3& x_t) {
  const double du = t[0] - exp.source[0], dv = t[1] - exp.source[1];
  if (du == 0.0 && dv == 0.0) return 1.0;
  const double kf = eval_kf(exp, t);
  if (!(kf > 0.0)) throw ExtractionError("reference kernel is not positive; increase eta");
  return laplace_kernel(exp.point, x_t) / kf;
}

double eval_rho(const KernelExpansion& exp, const NurbsSurface& surface, Param t) {
  return eval_rho(exp, t, surface.point(surface.wrap(t)));
}

namespace {

struct Edge {
  int axis;      // coordinate that varies along the edge
  double fixed;  // value of the other coordinate (relative to the source)
  double a, b;   // range of the varying coordinate (relative)
  double delta;  // signed distance of the edge line from the origin (outward normal)
};

std::array<Edge, 4> rect_edges(const Rect& r, Param s) {
  const double x0 = r.lo[0] - s[0], x1 = r.hi[0] - s[0];
  const double y0 = r.lo[1] - s[1], y1 = r.hi[1] - s[1];
  return {Edge{0, y0, x0, x1, -y0}, Edge{0, y1, x0, x1, y1}, Edge{1, x0, y0, y1, -x0}, Edge{1, x1, y0, y1, x1}};
}

// Panels along an edge, graded toward the complex zero of P on the edge line.
std::vector<double> edge_panels(const Edge& e, double E, double F, double G) {
  const double det = std::sqrt(std::max(E * G - F * F, 0.0));
  const double A = e.axis == 0 ? E : G;
  const double c = -F * e.fixed / A;
  const double w = std::abs(e.fixed) * det / A;
  return graded_panels(e.a, e.b, c, w);
}

template <class Fn>
void for_edge_nodes(const Edge& e, double E, double F, double G, int order, Fn&& fn) {
  const auto& g = gauss_legendre(order);
  const auto pts = edge_panels(e, E, F, G);
  for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
    const double m = 0.5 * (pts[p] + pts[p + 1]), h = 0.5 * (pts[p + 1] - pts[p]);
    for (int q = 0; q < order; ++q) {
      const double x = m + h * g.nodes[q];
      const double u = e.axis == 0 ? x : e.fixed;
      const double v = e.axis == 0 ? e.fixed : x;
      fn(u, v, h * g.weights[q]);
    }
  }
}

constexpr int kEdgeOrder = 10;

double distance_to_rect(const Rect& r, Param s) {
  const double dx = std::max({r.lo[0] - s[0], 0.0, s[0] - r.hi[0]});
  const double dy = std::max({r.lo[1] - s[1], 0.0, s[1] - r.hi[1]});
  return std::hypot(dx, dy);
}

double anisotropy(double E, double F, double G) {
  const double tr = 0.5 * (E + G), d = std::sqrt(0.25 * (E - G) * (E - G) + F * F);
  return std::sqrt((tr + d) / std::max(tr - d, 1e-300));
}

// Normalized distance of the source from a rectangle, measured in half-widths
// and reduced by the anisotropy of P. Gauss rules converge like rho^{-2n}.
double separation(const Rect& r, Param s, double kappa) {
  const double hw = 0.5 * std::max(r.width(0), r.width(1));
  return distance_to_rect(r, s) / (hw * kappa);
}

int gauss_order_for(double sep, int min_order) {
  const double rho = 1.0 + sep + std::sqrt(sep * (2.0 + sep));
  const int n = static_cast<int>(std::ceil(16.1 / std::log(rho)));
  return std::clamp(n, min_order, 20);
}

constexpr double kGaussSeparation = 1.5;

double adaptive_smooth(const Rect& r, Param s, double kappa, int depth, const auto& f) {
  const double sep = separation(r, s, kappa);
  if (sep < kGaussSeparation && depth < 40) {
    const double mx = 0.5 * (r.lo[0] + r.hi[0]), my = 0.5 * (r.lo[1] + r.hi[1]);
    double sum = 0.0;
    sum += adaptive_smooth(Rect{{r.lo[0], r.lo[1]}, {mx, my}}, s, kappa, depth + 1, f);
    sum += adaptive_smooth(Rect{{mx, r.lo[1]}, {r.hi[0], my}}, s, kappa, depth + 1, f);
    sum += adaptive_smooth(Rect{{r.lo[0], my}, {mx, r.hi[1]}}, s, kappa, depth + 1, f);
    sum += adaptive_smooth(Rect{{mx, my}, {r.hi[0], r.hi[1]}}, s, kappa, depth + 1, f);
    return sum;
  }
  const int n = gauss_order_for(sep, 4);
  const auto& g = gauss_legendre(n);
  const double m0 = 0.5 * (r.lo[0] + r.hi[0]), h0 = 0.5 * r.width(0);
  const double m1 = 0.5 * (r.lo[1] + r.hi[1]), h1 = 0.5 * r.width(1);
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      sum += g.weights[i] * g.weights[j] * f(m0 + h0 * g.nodes[i], m1 + h1 * g.nodes[j]);
  return sum * h0 * h1;
}

}  // namespace

double monomial_kernel_integral(int a, int b, int ell, double E, double F, double G, const Rect& rect,
                                Param s) {
  if (a < 0 || b < 0 || ell < 1) throw ArgumentError("monomial integral: negative exponent or ell < 1");
  if (!(E > 0.0) || !(E * G - F * F > 0.0)) throw ArgumentError("monomial integral: form is not positive definite");
  if (!(rect.width(0) > 0.0) || !(rect.width(1) > 0.0)) throw ArgumentError("monomial integral: empty rectangle");
  const double power = -(2.0 * ell - 1.0) / 2.0;
  auto f = [&](double u, double v) {
    return std::pow(u, a) * std::pow(v, b) * std::pow(E * u * u + 2 * F * u * v + G * v * v, power);
  };
  const int k = a + b - (2 * ell - 1);
  if (k + 2 <= 0) {
    if (rect.contains(s)) throw ArgumentError("monomial integral: not integrable at the source");
    const double kappa = anisotropy(E, F, G);
    return adaptive_smooth(rect, s, kappa, 0,
                           [&](double t1, double t2) { return f(t1 - s[0], t2 - s[1]); });
  }
  double sum = 0.0;
  for (const auto& e : rect_edges(rect, s)) {
    if (std::abs(e.delta) <= 1e-14 * std::max(rect.width(0), rect.width(1))) continue;
    double edge = 0.0;
    for_edge_nodes(e, E, F, G, kEdgeOrder, [&](double u, double v, double w) { edge += w * f(u, v); });
    sum += e.delta * edge;
  }
  return sum / (k + 2);
}

void element_moments(const KernelExpansion& exp, const Rect& elem, int deg1, int deg2, std::span<double> out) {
  const int n2 = deg2 + 1;
  const std::size_t count = static_cast<std::size_t>(deg1 + 1) * n2;
  if (out.size() < count) throw ArgumentError("element moments: output too small");
  std::fill(out.begin(), out.begin() + count, 0.0);
  const double m0 = 0.5 * (elem.lo[0] + elem.hi[0]), r0 = 0.5 * elem.width(0);
  const double m1 = 0.5 * (elem.lo[1] + elem.hi[1]), r1 = 0.5 * elem.width(1);
  const Param s = exp.source;
  const double eta = exp.effective_eta();
  double px[8], py[8];

  auto accumulate = [&](double xi, double et, double w) {
    px[0] = py[0] = 1.0;
    for (int a = 1; a <= deg1; ++a) px[a] = px[a - 1] * xi;
    for (int b = 1; b <= deg2; ++b) py[b] = py[b - 1] * et;
    for (int a = 0; a <= deg1; ++a) {
      const double wa = w * px[a];
      for (int b = 0; b <= deg2; ++b) out[a * n2 + b] += wa * py[b];
    }
  };

  const double kappa = anisotropy(exp.E, exp.F, exp.G);
  const double sep = separation(elem, s, kappa);
  if (sep >= kGaussSeparation) {
    const int n = gauss_order_for(sep, (std::max(deg1, deg2) + 4) / 2);
    const auto& g = gauss_legendre(n);
    for (int i = 0; i < n; ++i) {
      const double t1 = m0 + r0 * g.nodes[i];
      for (int j = 0; j < n; ++j) {
        const double t2 = m1 + r1 * g.nodes[j];
        accumulate(g.nodes[i], g.nodes[j], g.weights[i] * g.weights[j] * r0 * r1 * eval_kf(exp, {t1, t2}));
      }
    }
    return;
  }

  // Cone decomposition from the source: int_R f = sum_e delta_e int_e int_0^1 f(lambda x) lambda dlambda ds.
  // The kernel pieces are homogeneous, so the radial factor is lambda^{l-1}
  // (lambda^3 for the eta term) times a polynomial in lambda.
  const int nr = (deg1 + deg2 + 3) / 2 + 1;
  const auto& gr = gauss_legendre(nr);
  double lam[16], wl[16];
  for (int q = 0; q < nr; ++q) {
    lam[q] = 0.5 * (1.0 + gr.nodes[q]);
    wl[q] = 0.5 * gr.weights[q];
  }
  const double scale = std::max(elem.width(0), elem.width(1));
  for (const auto& e : rect_edges(elem, s)) {
    if (std::abs(e.delta) <= 1e-14 * scale) continue;
    for_edge_nodes(e, exp.E, exp.F, exp.G, kEdgeOrder, [&](double u, double v, double w) {
      double k[3];
      exp.pieces(u, v, k);
      const double keta = eta * (u * u + v * v);
      for (int q = 0; q < nr; ++q) {
        const double l = lam[q];
        const double radial = k[0] + l * (k[1] + l * (k[2] + l * keta));
        const double xi = (s[0] + l * u - m0) / r0, et = (s[1] + l * v - m1) / r1;
        accumulate(xi, et, e.delta * w * wl[q] * radial);
      }
    });
  }
}

MomentBasis::MomentBasis(KnotVector u, KnotVector v) : kv_{std::move(u), std::move(v)} {
  for (int dir = 0; dir < 2; ++dir) {
    const auto& kv = kv_[dir];
    const int d = kv.degree(), dim = kv.dimension();
    const auto bp = kv.breakpoints();
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) elem_[dir].push_back({bp[i], bp[i + 1]});
    const int nel = static_cast<int>(elem_[dir].size());
    conv_[dir].assign(static_cast<std::size_t>(dim) * nel * (d + 1), 0.0);
    supp_[dir].assign(dim, {});
    std::vector<double> ders((d + 1) * (d + 1));
    for (int e = 0; e < nel; ++e) {
      const double m = 0.5 * (elem_[dir][e][0] + elem_[dir][e][1]);
      const double r = 0.5 * (elem_[dir][e][1] - elem_[dir][e][0]);
      const int span = kv.find_span(m);
      eval_basis_ders(kv, span, m, d, ders);
      for (int i = 0; i <= d; ++i) {
        const int k = span - d + i;
        double fac = 1.0;
        for (int a = 0; a <= d; ++a) {
          if (a > 0) fac *= r / a;
          conv_[dir][(static_cast<std::size_t>(k) * nel + e) * (d + 1) + a] = ders[a * (d + 1) + i] * fac;
        }
        supp_[dir][k].push_back(e);
      }
    }
  }
}

Eigen::MatrixXd modified_moments(const KernelExpansion& exp, const MomentBasis& basis) {
  const int n1 = basis.elements(0), n2 = basis.elements(1);
  const int d1 = basis.degree(0), d2 = basis.degree(1);
  const int blk = (d1 + 1) * (d2 + 1);
  std::vector<double> M(static_cast<std::size_t>(n1) * n2 * blk);
  for (int e1 = 0; e1 < n1; ++e1) {
    for (int e2 = 0; e2 < n2; ++e2) {
      const auto x = basis.element(0, e1), y = basis.element(1, e2);
      element_moments(exp, Rect{{x[0], y[0]}, {x[1], y[1]}}, d1, d2,
                      std::span<double>(M.data() + (static_cast<std::size_t>(e1) * n2 + e2) * blk, blk));
    }
  }
  const int dim1 = basis.knots(0).dimension(), dim2 = basis.knots(1).dimension();
  // X(k1, e2, b) = sum_{e1, a} T1(k1, e1, a) M(e1, e2, a, b)
  std::vector<double> X(static_cast<std::size_t>(dim1) * n2 * (d2 + 1), 0.0);
  for (int k1 = 0; k1 < dim1; ++k1) {
    for (int e1 : basis.support(0, k1)) {
      for (int a = 0; a <= d1; ++a) {
        const double t = basis.coeff(0, k1, e1, a);
        if (t == 0.0) continue;
        for (int e2 = 0; e2 < n2; ++e2) {
          const double* m = M.data() + (static_cast<std::size_t>(e1) * n2 + e2) * blk + a * (d2 + 1);
          double* x = X.data() + (static_cast<std::size_t>(k1) * n2 + e2) * (d2 + 1);
          for (int b = 0; b <= d2; ++b) x[b] += t * m[b];
        }
      }
    }
  }
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(dim1, dim2);
  for (int k2 = 0; k2 < dim2; ++k2) {
    for (int e2 : basis.support(1, k2)) {
      for (int b = 0; b <= d2; ++b) {
        const double t = basis.coeff(1, k2, e2, b);
        if (t == 0.0) continue;
        for (int k1 = 0; k1 < dim1; ++k1) mu(k1, k2) += t * X[(static_cast<std::size_t>(k1) * n2 + e2) * (d2 + 1) + b];
      }
    }
  }
  return mu;
}

Eigen::MatrixXd modified_moments(const KernelExpansion& exp, const KnotVector& u, const KnotVector& v) {
  return modified_moments(exp, MomentBasis(u, v));
}

}  // namespace igabem
