#pragma once

#include <Eigen/Core>
#include <array>
#include <span>
#include <vector>

#include "igabem/knot_vector.hpp"
#include "igabem/nurbs_surface.hpp"

namespace igabem {

// Derivative-free local spline quasi-interpolant of degree p on a uniform
// partition of [a,b] with N nodes (the breakpoints of the spline).
//
// Each B-spline coefficient is a linear combination of p+2 consecutive samples.
// The weights are the minimum-norm solution of the exactness conditions
// "coefficient = polar form of f at the interior knots" for every polynomial of
// degree <= p. Interior stencils are centered on the Greville abscissa, which
// makes them symmetric; this gives the O(h^{p+2}) integration error for even p.
class QiOperator {
 public:
  QiOperator(int degree, double a, double b, int nodes);

  int degree() const { return degree_; }
  int node_count() const { return nodes_; }
  double node(int i) const { return a_ + (b_ - a_) * i / (nodes_ - 1); }
  double lower() const { return a_; }
  double upper() const { return b_; }
  const KnotVector& knots() const { return knots_; }
  int dimension() const { return knots_.dimension(); }

  // Stencil of coefficient k: samples first(k) .. first(k)+p+1.
  int first(int k) const { return first_[k]; }
  double weight(int k, int m) const { return weights_(k, m); }
  int stencil_width() const { return degree_ + 2; }

  // Dense (dimension x nodes) matrix mapping samples to coefficients.
  Eigen::MatrixXd matrix() const;

  std::vector<double> apply(std::span<const double> samples) const;

 private:
  int degree_;
  double a_, b_;
  int nodes_;
  KnotVector knots_;
  std::vector<int> first_;
  Eigen::MatrixXd weights_;  // dimension x (p+2)
};

QiOperator build_qi(int p, double a, double b, int nodes);

// Tensor-product spline on a rectangle; coeffs(k1, k2) multiplies B_k1(t1) B_k2(t2).
struct LocalSpline2D {
  std::array<KnotVector, 2> knots;
  Eigen::MatrixXd coeffs;

  double eval(Param t) const;
};

// samples(i1, i2) holds f at (op1.node(i1), op2.node(i2)).
LocalSpline2D apply_qi_2d(const QiOperator& op1, const QiOperator& op2, const Eigen::MatrixXd& samples);

}  // namespace igabem
