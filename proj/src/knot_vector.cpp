#include "igabem/knot_vector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "igabem/errors.hpp"

namespace igabem {

namespace {

double knot_tolerance(double a, double b) { return 1e-12 * std::max(1.0, b - a); }

}  // namespace

KnotVector::KnotVector(std::vector<double> knots, int degree)
    : knots_(std::move(knots)), degree_(degree) {
  if (degree_ < 0) throw ConfigError("knot vector: negative degree");
  const int n = size();
  if (n < 2 * (degree_ + 1)) {
    std::ostringstream msg;
    msg << "knot vector: " << n << " knots are too few for degree " << degree_;
    throw ConfigError(msg.str());
  }
  for (int i = 1; i < n; ++i)
    if (!(knots_[i] >= knots_[i - 1])) throw ConfigError("knot vector: knots must be nondecreasing");
  if (!(knots_.back() > knots_.front())) throw ConfigError("knot vector: empty parameter interval");
  for (int i = 1; i <= degree_; ++i)
    if (knots_[i] != knots_[0] || knots_[n - 1 - i] != knots_[n - 1])
      throw ConfigError("knot vector: end knots must have multiplicity degree+1");
  if (knots_[degree_ + 1] == knots_[0] || knots_[n - 2 - degree_] == knots_[n - 1])
    throw ConfigError("knot vector: end knots exceed multiplicity degree+1");
  for (int i = 0; i + degree_ + 1 < n; ++i)
    if (i > 0 && knots_[i] == knots_[i + degree_ + 1])
      throw ConfigError("knot vector: interior multiplicity exceeds degree+1");
}

int KnotVector::find_span(double t) const {
  const double a = front(), b = back();
  const double tol = knot_tolerance(a, b);
  if (t < a - tol || t > b + tol || std::isnan(t)) {
    std::ostringstream msg;
    msg << "parameter " << t << " outside [" << a << ", " << b << "]";
    throw DomainError(msg.str());
  }
  t = std::clamp(t, a, b);
  const int last = dimension() - 1;  // largest admissible span index
  if (t >= b) {
    int r = last;
    while (knots_[r] == knots_[r + 1]) --r;
    return r;
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  int r = static_cast<int>(it - knots_.begin()) - 1;
  return std::min(r, last);
}

std::vector<double> KnotVector::breakpoints() const {
  std::vector<double> out;
  for (double t : knots_)
    if (out.empty() || t > out.back()) out.push_back(t);
  return out;
}

int KnotVector::multiplicity(double x) const {
  const double tol = knot_tolerance(front(), back());
  return static_cast<int>(std::count_if(knots_.begin(), knots_.end(),
                                        [&](double t) { return std::abs(t - x) <= tol; }));
}

double KnotVector::max_gap() const {
  double h = 0.0;
  for (int i = 0; i + 1 < size(); ++i) h = std::max(h, knots_[i + 1] - knots_[i]);
  return h;
}

std::vector<int> KnotVector::support_spans(int i) const {
  std::vector<int> spans;
  for (int r = i; r <= i + degree_; ++r)
    if (knots_[r] < knots_[r + 1]) spans.push_back(r);
  return spans;
}

KnotVector KnotVector::with_inserted(std::span<const double> new_knots) const {
  std::vector<double> k = knots_;
  k.insert(k.end(), new_knots.begin(), new_knots.end());
  std::sort(k.begin(), k.end());
  return KnotVector(std::move(k), degree_);
}

void eval_basis_ders(const KnotVector& kv, int span, double t, int n, std::span<double> ders) {
  const int d = kv.degree();
  const int nd = std::min(n, d);
  std::fill(ders.begin(), ders.begin() + (n + 1) * (d + 1), 0.0);

  // Triangular table of basis values (upper part) and knot differences (lower part).
  double ndu[8][8];
  double left[8], right[8];
  double a[2][8];
  ndu[0][0] = 1.0;
  for (int j = 1; j <= d; ++j) {
    left[j] = t - kv[span + 1 - j];
    right[j] = kv[span + j] - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  for (int j = 0; j <= d; ++j) ders[j] = ndu[j][d];

  for (int r = 0; r <= d; ++r) {
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= nd; ++k) {
      double dd = 0.0;
      const int rk = r - k, pk = d - k;
      if (r >= k) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        dd = a[s2][0] * ndu[rk][pk];
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : d - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
        dd += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
        dd += a[s2][k] * ndu[r][pk];
      }
      ders[k * (d + 1) + r] = dd;
      std::swap(s1, s2);
    }
  }
  double factor = d;
  for (int k = 1; k <= nd; ++k) {
    for (int j = 0; j <= d; ++j) ders[k * (d + 1) + j] *= factor;
    factor *= (d - k);
  }
}

BasisValues eval_basis(const KnotVector& kv, double t, int deriv_order) {
  const int d = kv.degree();
  if (deriv_order < 0 || d > 7) throw ArgumentError("eval_basis: unsupported derivative order or degree");
  const int span = kv.find_span(t);
  t = std::clamp(t, kv.front(), kv.back());
  std::vector<double> ders((deriv_order + 1) * (d + 1));
  eval_basis_ders(kv, span, t, deriv_order, ders);
  BasisValues out;
  out.first = span - d;
  out.values.assign(ders.begin() + deriv_order * (d + 1), ders.begin() + (deriv_order + 1) * (d + 1));
  return out;
}

std::vector<double> greville_points(const KnotVector& kv, bool improved, double beta) {
  const int d = kv.degree();
  const int m = kv.dimension();
  std::vector<double> xi(m);
  for (int i = 0; i < m; ++i) {
    if (d == 0) {
      xi[i] = 0.5 * (kv[i] + kv[i + 1]);
      continue;
    }
    double s = 0.0;
    for (int k = 1; k <= d; ++k) s += kv[i + k];
    xi[i] = s / d;
  }
  if (improved) {
    if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("greville: beta must lie in [0,1)");
    if (m >= 2) {
      const double first = xi[0] + beta * (xi[1] - xi[0]);
      const double last = xi[m - 1] - beta * (xi[m - 1] - xi[m - 2]);
      xi[0] = first;
      xi[m - 1] = last;
    }
  }
  for (int i = 1; i < m; ++i)
    if (!(xi[i] > xi[i - 1])) throw ConfigError("greville: coincident collocation abscissas");
  return xi;
}

double bspline_definite_integral(const KnotVector& kv, int i) {
  const int d = kv.degree();
  return (kv[i + d + 1] - kv[i]) / (d + 1);
}

KnotVector refine_dyadic(const KnotVector& kv) {
  std::vector<double> mids;
  const auto bp = kv.breakpoints();
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) mids.push_back(0.5 * (bp[i] + bp[i + 1]));
  return kv.with_inserted(mids);
}

std::vector<double> insert_knots(const KnotVector& kv, std::span<const double> coeffs,
                                 std::span<const double> new_knots) {
  const int d = kv.degree();
  std::vector<double> knots(kv.knots().begin(), kv.knots().end());
  std::vector<double> c(coeffs.begin(), coeffs.end());
  if (static_cast<int>(c.size()) != kv.dimension()) throw ArgumentError("insert_knots: coefficient count mismatch");
  for (double x : new_knots) {
    KnotVector cur(knots, d);
    const int r = std::min(cur.find_span(x), cur.dimension() - 1);
    std::vector<double> nc(c.size() + 1);
    for (int i = 0; i <= r - d; ++i) nc[i] = c[i];
    for (int i = std::max(r - d + 1, 0); i <= r; ++i) {
      const double alpha = (x - knots[i]) / (knots[i + d] - knots[i]);
      nc[i] = alpha * c[i] + (1.0 - alpha) * c[i - 1];
    }
    for (int i = r + 1; i < static_cast<int>(nc.size()); ++i) nc[i] = c[i - 1];
    knots.insert(knots.begin() + r + 1, x);
    c = std::move(nc);
  }
  return c;
}

double blossom(const KnotVector& kv, std::span<const double> coeffs, int span,
               std::span<const double> xs) {
  const int d = kv.degree();
  double work[16];
  for (int i = 0; i <= d; ++i) work[i] = coeffs[span - d + i];
  for (int k = 1; k <= d; ++k) {
    const double x = xs[k - 1];
    for (int i = d; i >= k; --i) {
      const int idx = span - d + i;
      const double alpha = (x - kv[idx]) / (kv[idx + d + 1 - k] - kv[idx]);
      work[i] = (1.0 - alpha) * work[i - 1] + alpha * work[i];
    }
  }
  return work[d];
}

double eval_spline(const KnotVector& kv, std::span<const double> coeffs, double t, int deriv_order) {
  const auto b = eval_basis(kv, t, deriv_order);
  double s = 0.0;
  for (std::size_t k = 0; k < b.values.size(); ++k) s += coeffs[b.first + k] * b.values[k];
  return s;
}

}  // namespace igabem
