#include "igabem/spline_product.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "igabem/errors.hpp"

namespace igabem {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_same_interval(const KnotVector& a, const KnotVector& b) {
  const double tol = 1e-12 * std::max(1.0, a.back() - a.front());
  if (std::abs(a.front() - b.front()) > tol || std::abs(a.back() - b.back()) > tol)
    throw ArgumentError("spline product: factors live on different intervals");
}

// Span of kv containing the midpoint of [x0, x1].
int span_of(const KnotVector& kv, double x0, double x1) { return kv.find_span(0.5 * (x0 + x1)); }

// Non-empty product span inside the support of product basis function k, closest to its middle.
int central_span(const KnotVector& kv, int k) {
  const int P = kv.degree();
  const double mid = 0.5 * (kv[k] + kv[k + P + 1]);
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int r = k; r <= k + P; ++r) {
    if (!(kv[r] < kv[r + 1])) continue;
    const double d = std::abs(0.5 * (kv[r] + kv[r + 1]) - mid);
    if (d < best_d) {
      best_d = d;
      best = r;
    }
  }
  return best;
}

// Polar form of every basis function of `span` of kv at xs (values indexed span-d .. span).
void blossom_basis(const KnotVector& kv, int span, const double* xs, double* out) {
  const int d = kv.degree();
  std::vector<double> unit(kv.dimension(), 0.0);
  for (int i = 0; i <= d; ++i) {
    unit[span - d + i] = 1.0;
    out[i] = blossom(kv, unit, span, std::span<const double>(xs, d));
    unit[span - d + i] = 0.0;
  }
}

}  // namespace

KnotVector product_knots(const KnotVector& a, const KnotVector& b) {
  check_same_interval(a, b);
  const int p = a.degree(), d = b.degree(), P = p + d;
  const double tol = 1e-12 * std::max(1.0, a.back() - a.front());
  std::vector<double> bp = a.breakpoints();
  for (double x : b.breakpoints())
    if (std::none_of(bp.begin(), bp.end(), [&](double y) { return std::abs(x - y) <= tol; })) bp.push_back(x);
  std::sort(bp.begin(), bp.end());

  std::vector<double> knots(P + 1, a.front());
  constexpr int kSmooth = std::numeric_limits<int>::max() / 4;
  for (std::size_t i = 1; i + 1 < bp.size(); ++i) {
    const int ma = a.multiplicity(bp[i]), mb = b.multiplicity(bp[i]);
    const int ra = ma > 0 ? p - ma : kSmooth;
    const int rb = mb > 0 ? d - mb : kSmooth;
    const int mult = std::clamp(P - std::min(ra, rb), 1, P + 1);
    knots.insert(knots.end(), mult, bp[i]);
  }
  knots.insert(knots.end(), P + 1, a.back());
  return KnotVector(std::move(knots), P);
}

Eigen::MatrixXd product_matrix(const KnotVector& a, const Spline1D& b, const KnotVector& product) {
  check_same_interval(a, b.knots);
  const int p = a.degree(), d = b.knots.degree(), P = p + d;
  if (product.degree() != P) throw ArgumentError("product_matrix: product space has the wrong degree");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(a.dimension(), product.dimension());

  // Subsets of the P interior knots with exactly p elements.
  std::vector<unsigned> subsets;
  for (unsigned mask = 0; mask < (1u << P); ++mask)
    if (std::popcount(mask) == p) subsets.push_back(mask);
  const double scale = 1.0 / binomial(P, p);

  std::vector<double> xa(std::max(p, 1)), xb(std::max(d, 1)), ba(p + 1);
  for (int l = 0; l < product.dimension(); ++l) {
    const int r = central_span(product, l);
    const int sa = span_of(a, product[r], product[r + 1]);
    const int sb = span_of(b.knots, product[r], product[r + 1]);
    const double* y = product.knots().data() + l + 1;
    for (unsigned mask : subsets) {
      int ia = 0, ib = 0;
      for (int k = 0; k < P; ++k) (mask >> k & 1u ? xa[ia++] : xb[ib++]) = y[k];
      const double vb = blossom(b.knots, b.coeffs, sb, std::span<const double>(xb.data(), d));
      if (vb == 0.0) continue;
      blossom_basis(a, sa, xa.data(), ba.data());
      for (int i = 0; i <= p; ++i) M(sa - p + i, l) += scale * vb * ba[i];
    }
  }
  return M;
}

Spline1D multiply_1d(const Spline1D& a, const Spline1D& b) {
  if (static_cast<int>(a.coeffs.size()) != a.knots.dimension() ||
      static_cast<int>(b.coeffs.size()) != b.knots.dimension())
    throw ArgumentError("multiply_1d: coefficient count mismatch");
  KnotVector prod = product_knots(a.knots, b.knots);
  const Eigen::MatrixXd M = product_matrix(a.knots, b, prod);
  const Eigen::Map<const Eigen::VectorXd> ca(a.coeffs.data(), a.coeffs.size());
  const Eigen::VectorXd c = M.transpose() * ca;
  return Spline1D{std::move(prod), std::vector<double>(c.data(), c.data() + c.size())};
}

Spline1D restrict_spline(const Spline1D& s, double lo, double hi) {
  const int d = s.knots.degree();
  const double tol = 1e-12 * std::max(1.0, s.upper() - s.lower());
  if (lo < s.lower() - tol || hi > s.upper() + tol || !(hi > lo))
    throw ArgumentError("restrict_spline: interval outside the spline domain");
  std::vector<double> knots(d + 1, lo);
  for (double t : s.knots.knots())
    if (t > lo + tol && t < hi - tol) knots.push_back(t);
  knots.insert(knots.end(), d + 1, hi);
  KnotVector kv(std::move(knots), d);
  std::vector<double> c(kv.dimension());
  for (int k = 0; k < kv.dimension(); ++k) {
    const int r = central_span(kv, k);
    const int sr = span_of(s.knots, kv[r], kv[r + 1]);
    c[k] = blossom(s.knots, s.coeffs, sr, std::span<const double>(kv.knots().data() + k + 1, d));
  }
  return Spline1D{std::move(kv), std::move(c)};
}

Spline1D unit_bspline(const KnotVector& kv, int i) {
  std::vector<double> c(kv.dimension(), 0.0);
  c[i] = 1.0;
  return restrict_spline(Spline1D{kv, std::move(c)}, kv.support_begin(i), kv.support_end(i));
}

LocalSpline2D multiply_2d(const LocalSpline2D& s, const Spline1D& b1, const Spline1D& b2) {
  LocalSpline2D out;
  out.knots = {product_knots(s.knots[0], b1.knots), product_knots(s.knots[1], b2.knots)};
  const Eigen::MatrixXd M1 = product_matrix(s.knots[0], b1, out.knots[0]);
  const Eigen::MatrixXd M2 = product_matrix(s.knots[1], b2, out.knots[1]);
  out.coeffs = M1.transpose() * s.coeffs * M2;
  return out;
}

double integrate(const Spline1D& s) {
  double v = 0.0;
  for (int i = 0; i < s.knots.dimension(); ++i) v += s.coeffs[i] * bspline_definite_integral(s.knots, i);
  return v;
}

double integrate(const LocalSpline2D& s) {
  double v = 0.0;
  for (int i = 0; i < s.knots[0].dimension(); ++i)
    for (int j = 0; j < s.knots[1].dimension(); ++j)
      v += s.coeffs(i, j) * bspline_definite_integral(s.knots[0], i) * bspline_definite_integral(s.knots[1], j);
  return v;
}

}  // namespace igabem
