#include <cmath>
#include <random>

#include "doctest.h"
#include "igabem/errors.hpp"
#include "igabem/quasi_interp.hpp"

using namespace igabem;

namespace {

std::vector<double> sample(const QiOperator& op, double (*f)(double)) {
  std::vector<double> s(op.node_count());
  for (int i = 0; i < op.node_count(); ++i) s[i] = f(op.node(i));
  return s;
}

double max_error(const QiOperator& op, double (*f)(double)) {
  const auto c = op.apply(sample(op, f));
  double e = 0.0;
  for (int n = 0; n <= 2000; ++n) {
    const double t = op.lower() + (op.upper() - op.lower()) * n / 2000.0;
    e = std::max(e, std::abs(eval_spline(op.knots(), c, t) - f(t)));
  }
  return e;
}

}  // namespace

TEST_CASE("constants give unit coefficients") {
  for (int p = 0; p <= 4; ++p) {
    const QiOperator op(p, -0.7, 2.1, 11);
    const auto c = op.apply(std::vector<double>(11, 1.0));
    for (double v : c) CHECK(std::abs(v - 1.0) <= 1e-13);
  }
}

TEST_CASE("polynomial reproduction up to the degree") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const QiOperator op(2, 0.0, 1.0, 13);
  CHECK(op.dimension() == 14);
  const auto c = op.apply(sample(op, [](double t) { return t * t; }));
  for (int n = 0; n < 50; ++n) {
    const double t = U(rng);
    CHECK(std::abs(eval_spline(op.knots(), c, t) - t * t) <= 1e-13);
  }
  for (int p = 0; p <= 4; ++p) {
    const QiOperator q(p, -1.0, 3.0, p + 5);
    std::vector<double> s(q.node_count());
    for (int i = 0; i < q.node_count(); ++i) s[i] = std::pow(q.node(i) - 0.3, p);
    const auto cq = q.apply(s);
    for (double t : {-1.0, -0.41, 0.9, 2.2, 3.0})
      CHECK(std::abs(eval_spline(q.knots(), cq, t) - std::pow(t - 0.3, p)) <= 1e-12);
  }
}

TEST_CASE("approximation order p+1 for a smooth function") {
  double prev = 0.0;
  for (int k = 0; k < 4; ++k) {
    const int n = 8 * (1 << k) + 1;
    const double e = max_error(QiOperator(2, 0.0, 1.0, n), [](double t) { return std::sin(t); });
    if (k > 0) {
      const double order = std::log2(prev / e);
      CHECK(order >= 2.7);
      CHECK(order <= 3.3);
    }
    prev = e;
  }
}

TEST_CASE("stencils and argument checks") {
  const QiOperator op(2, 0.0, 1.0, 9);
  CHECK(op.stencil_width() == 4);
  for (int k = 0; k < op.dimension(); ++k) {
    CHECK(op.first(k) >= 0);
    CHECK(op.first(k) + op.stencil_width() <= op.node_count());
  }
  const Eigen::MatrixXd M = op.matrix();
  CHECK(M.rows() == op.dimension());
  CHECK(M.cols() == op.node_count());
  CHECK_THROWS_AS(QiOperator(2, 0.0, 1.0, 3), ConfigError);
  CHECK_THROWS_AS(QiOperator(2, 1.0, 1.0, 9), ConfigError);
  CHECK_THROWS_AS(op.apply(std::vector<double>(8, 0.0)), ArgumentError);
}

TEST_CASE("tensor quasi-interpolation") {
  const QiOperator o1(2, -1.0, 1.0, 7), o2(2, 0.0, 2.0, 9);
  Eigen::MatrixXd f(7, 9), one = Eigen::MatrixXd::Constant(7, 9, 3.5);
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 9; ++b) f(a, b) = o1.node(a) * o2.node(b);
  const auto s = apply_qi_2d(o1, o2, f);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U1(-1.0, 1.0), U2(0.0, 2.0);
  for (int n = 0; n < 50; ++n) {
    const Param t{U1(rng), U2(rng)};
    CHECK(std::abs(s.eval(t) - t[0] * t[1]) <= 1e-13);
  }
  const auto c = apply_qi_2d(o1, o2, one);
  CHECK((c.coeffs.array() - 3.5).abs().maxCoeff() <= 1e-13);

  // Rows first or columns first.
  Eigen::MatrixXd g(7, 9);
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 9; ++b) g(a, b) = std::exp(o1.node(a)) * std::cos(o2.node(b) + o1.node(a));
  const Eigen::MatrixXd rows_first = (o1.matrix() * g) * o2.matrix().transpose();
  const Eigen::MatrixXd cols_first = o1.matrix() * (g * o2.matrix().transpose());
  const auto t2 = apply_qi_2d(o1, o2, g);
  CHECK((rows_first - cols_first).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((t2.coeffs - rows_first).cwiseAbs().maxCoeff() <= 1e-14);

  CHECK_THROWS_AS(apply_qi_2d(o1, o2, Eigen::MatrixXd::Zero(9, 7)), ArgumentError);
}
