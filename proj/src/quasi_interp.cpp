#include "igabem/quasi_interp.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "igabem/errors.hpp"

namespace igabem {

namespace {

KnotVector uniform_clamped(int p, double a, double b, int nodes) {
  std::vector<double> k(p + 1, a);
  for (int i = 1; i + 1 < nodes; ++i) k.push_back(a + (b - a) * i / (nodes - 1));
  k.insert(k.end(), p + 1, b);
  return KnotVector(std::move(k), p);
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

QiOperator::QiOperator(int degree, double a, double b, int nodes)
    : degree_(degree), a_(a), b_(b), nodes_(nodes) {
  if (degree < 0) throw ConfigError("quasi-interpolant: negative degree");
  if (nodes < degree + 2) throw ConfigError("quasi-interpolant: needs at least degree+2 nodes");
  if (!(b > a)) throw ConfigError("quasi-interpolant: empty interval");
  knots_ = uniform_clamped(degree, a, b, nodes);

  // Work on the reference partition 0, 1, ..., nodes-1; the weights are scale invariant.
  const KnotVector ref = uniform_clamped(degree, 0.0, nodes - 1.0, nodes);
  const int p = degree, dim = ref.dimension(), width = p + 2;
  first_.resize(dim);
  weights_.resize(dim, width);
  for (int k = 0; k < dim; ++k) {
    std::vector<double> y(ref.knots().begin() + k + 1, ref.knots().begin() + k + 1 + p);
    double g = 0.0;
    for (double x : y) g += x;
    g = p > 0 ? g / p : 0.5 * (ref[k] + ref[k + 1]);
    const int start = std::clamp(static_cast<int>(std::floor(g - 0.5 * (p + 1) + 0.5)), 0, nodes - width);
    first_[k] = start;

    // Elementary symmetric sums of (y - g) give the polar form of (t - g)^r.
    std::vector<double> e(p + 1, 0.0);
    e[0] = 1.0;
    for (double x : y)
      for (int r = p; r >= 1; --r) e[r] += (x - g) * e[r - 1];
    Eigen::MatrixXd V(p + 1, width);
    Eigen::VectorXd rhs(p + 1);
    for (int r = 0; r <= p; ++r) {
      rhs(r) = e[r] / binomial(p, r);
      for (int m = 0; m < width; ++m) V(r, m) = std::pow(start + m - g, r);
    }
    const Eigen::VectorXd w = V.transpose() * (V * V.transpose()).ldlt().solve(rhs);
    weights_.row(k) = w.transpose();
  }
}

Eigen::MatrixXd QiOperator::matrix() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dimension(), nodes_);
  for (int k = 0; k < dimension(); ++k)
    for (int j = 0; j < stencil_width(); ++j) m(k, first_[k] + j) = weights_(k, j);
  return m;
}

std::vector<double> QiOperator::apply(std::span<const double> samples) const {
  if (static_cast<int>(samples.size()) != nodes_) throw ArgumentError("quasi-interpolant: sample count mismatch");
  std::vector<double> c(dimension(), 0.0);
  for (int k = 0; k < dimension(); ++k)
    for (int j = 0; j < stencil_width(); ++j) c[k] += weights_(k, j) * samples[first_[k] + j];
  return c;
}

QiOperator build_qi(int p, double a, double b, int nodes) { return QiOperator(p, a, b, nodes); }

double LocalSpline2D::eval(Param t) const {
  const auto b1 = eval_basis(knots[0], t[0]);
  const auto b2 = eval_basis(knots[1], t[1]);
  double s = 0.0;
  for (std::size_t i = 0; i < b1.values.size(); ++i)
    for (std::size_t j = 0; j < b2.values.size(); ++j)
      s += b1.values[i] * b2.values[j] * coeffs(b1.first + i, b2.first + j);
  return s;
}

LocalSpline2D apply_qi_2d(const QiOperator& op1, const QiOperator& op2, const Eigen::MatrixXd& samples) {
  if (samples.rows() != op1.node_count() || samples.cols() != op2.node_count())
    throw ArgumentError("apply_qi_2d: sample grid shape does not match the node counts");
  LocalSpline2D s;
  s.knots = {op1.knots(), op2.knots()};
  s.coeffs = op1.matrix() * samples * op2.matrix().transpose();
  return s;
}

}  // namespace igabem
