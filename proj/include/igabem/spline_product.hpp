#pragma once

#include <Eigen/Core>
#include <vector>

#include "igabem/knot_vector.hpp"
#include "igabem/quasi_interp.hpp"

namespace igabem {

struct Spline1D {
  KnotVector knots;
  std::vector<double> coeffs;

  double eval(double t, int deriv_order = 0) const { return eval_spline(knots, coeffs, t, deriv_order); }
  double lower() const { return knots.front(); }
  double upper() const { return knots.back(); }
};

// Knot vector of the product space: union of breakpoints, with multiplicity
// p+d-min(r1,r2) where r1, r2 are the continuity orders of the factors.
KnotVector product_knots(const KnotVector& a, const KnotVector& b);

// Exact product in B-form (Morken's discrete product formula: each coefficient
// is the average over argument splittings of the product of the factors' polar forms).
Spline1D multiply_1d(const Spline1D& a, const Spline1D& b);

// Row k holds the product-space coefficients of (basis function k of `a`) * b.
Eigen::MatrixXd product_matrix(const KnotVector& a, const Spline1D& b, const KnotVector& product);

// The same spline on a clamped knot vector over [lo, hi].
Spline1D restrict_spline(const Spline1D& s, double lo, double hi);

// Basis function i of kv on its own support, clamped.
Spline1D unit_bspline(const KnotVector& kv, int i);

// s(t1,t2) * b1(t1) * b2(t2) on the rectangle of s.
LocalSpline2D multiply_2d(const LocalSpline2D& s, const Spline1D& b1, const Spline1D& b2);

// Exact integral of a spline via its B-spline coefficients.
double integrate(const Spline1D& s);
double integrate(const LocalSpline2D& s);

}  // namespace igabem
