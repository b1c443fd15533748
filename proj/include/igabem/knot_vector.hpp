#pragma once

#include <span>
#include <vector>

namespace igabem {

// Clamped (open) knot vector of a univariate spline space of degree d.
// The first and last knots have multiplicity exactly d+1; interior knots
// may have any multiplicity up to d+1.
class KnotVector {
 public:
  KnotVector() = default;
  KnotVector(std::vector<double> knots, int degree);

  int degree() const { return degree_; }
  std::span<const double> knots() const { return knots_; }
  double operator[](int i) const { return knots_[i]; }
  int size() const { return static_cast<int>(knots_.size()); }
  int dimension() const { return size() - degree_ - 1; }
  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }

  // Index r with t_r <= t < t_{r+1} and t_r < t_{r+1}; t == back() maps to the
  // last non-empty span.
  int find_span(double t) const;

  // Distinct knot values, ascending.
  std::vector<double> breakpoints() const;
  // Multiplicity of the knot value x (0 when absent), compared with tolerance.
  int multiplicity(double x) const;
  // Largest gap between successive breakpoints.
  double max_gap() const;

  // Support [t_i, t_{i+d+1}] of basis function i.
  double support_begin(int i) const { return knots_[i]; }
  double support_end(int i) const { return knots_[i + degree_ + 1]; }

  // Non-empty knot spans intersecting the support of basis function i.
  std::vector<int> support_spans(int i) const;

  KnotVector with_inserted(std::span<const double> new_knots) const;

  bool operator==(const KnotVector&) const = default;

 private:
  std::vector<double> knots_;
  int degree_ = 0;
};

struct BasisValues {
  int first = 0;               // global index of values[0]
  std::vector<double> values;  // d+1 entries
};

// The d+1 possibly non-zero B-splines (or their deriv_order-th derivatives) at t.
BasisValues eval_basis(const KnotVector& kv, double t, int deriv_order = 0);

// Basis functions of span r and all derivatives up to n at t, written into
// ders[k*(d+1) + i] (k = derivative order, i = local index r-d+i).
void eval_basis_ders(const KnotVector& kv, int span, double t, int n, std::span<double> ders);

// Standard or inward-shifted ("improved") Greville abscissas.
std::vector<double> greville_points(const KnotVector& kv, bool improved = false, double beta = 0.5);

// Exact integral over [a,b] of basis function i.
double bspline_definite_integral(const KnotVector& kv, int i);

// Insert the midpoint of every non-empty knot span once.
KnotVector refine_dyadic(const KnotVector& kv);

// Coefficients of the same spline after inserting new_knots (Boehm insertion).
std::vector<double> insert_knots(const KnotVector& kv, std::span<const double> coeffs,
                                 std::span<const double> new_knots);

// Polar form of the polynomial piece of the spline on span r, evaluated at the
// d arguments xs (de Boor's algorithm with one argument per level).
double blossom(const KnotVector& kv, std::span<const double> coeffs, int span,
               std::span<const double> xs);

// Point evaluation of a spline with the given coefficients.
double eval_spline(const KnotVector& kv, std::span<const double> coeffs, double t,
                   int deriv_order = 0);

}  // namespace igabem
