#include "igabem/potential.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "igabem/errors.hpp"
#include "igabem/quadrature.hpp"

namespace igabem {

double eval_density(const Eigen::VectorXd& coeffs, const TensorSplineSpace& space, Param t) {
  if (coeffs.size() != space.dimension()) throw ArgumentError("density: coefficient count mismatch");
  const auto b1 = eval_basis(space.knots(0), t[0], 0);
  const auto b2 = eval_basis(space.knots(1), t[1], 0);
  double s = 0.0;
  for (std::size_t l = 0; l < b2.values.size(); ++l)
    for (std::size_t k = 0; k < b1.values.size(); ++k)
      s += coeffs(space.index(b1.first + k, b2.first + l)) * b1.values[k] * b2.values[l];
  return s;
}

DensityErrors density_errors(const std::function<double(Param)>& psi, const Eigen::VectorXd& coeffs,
                             const NurbsSurface& surface, const TensorSplineSpace& space, int extra_order) {
  DensityErrors out;
  const int n = std::max(space.knots(0).degree(), space.knots(1).degree()) + 3 + extra_order;
  const auto& g = gauss_legendre(n);
  const auto e1 = space.knots(0).breakpoints(), e2 = space.knots(1).breakpoints();
  double sum = 0.0;
  for (std::size_t a = 0; a + 1 < e1.size(); ++a) {
    for (std::size_t b = 0; b + 1 < e2.size(); ++b) {
      const double m0 = 0.5 * (e1[a] + e1[a + 1]), h0 = 0.5 * (e1[a + 1] - e1[a]);
      const double m1 = 0.5 * (e2[b] + e2[b + 1]), h1 = 0.5 * (e2[b + 1] - e2[b]);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const Param t{m0 + h0 * g.nodes[i], m1 + h1 * g.nodes[j]};
          const double d = psi(t) - eval_density(coeffs, space, t);
          sum += g.weights[i] * g.weights[j] * h0 * h1 * d * d * surface.eval(t, 1).jacobian;
          out.max_abs = std::max(out.max_abs, std::abs(d));
        }
      }
    }
  }
  out.l2 = std::sqrt(sum);
  return out;
}

double density_error_l2(const std::function<double(Param)>& psi, const Eigen::VectorXd& coeffs,
                        const NurbsSurface& surface, const TensorSplineSpace& space, int extra_order) {
  return density_errors(psi, coeffs, surface, space, extra_order).l2;
}

PotentialEvaluator::PotentialEvaluator(const NurbsSurface& surface, const TensorSplineSpace& space,
                                       const CubatureConfig& config)
    : threshold_(config.near_threshold) {
  config.validate();
  rules_.reserve(space.dimension());
  for (int j = 0; j < space.dimension(); ++j) rules_.push_back(make_trial_rule(surface, space, j, config));
}

double PotentialEvaluator::operator()(const Eigen::VectorXd& coeffs, const Vec3& x) const {
  if (coeffs.size() != static_cast<Eigen::Index>(rules_.size()))
    throw ArgumentError("potential: coefficient count mismatch");
  double u = 0.0;
  for (std::size_t j = 0; j < rules_.size(); ++j) {
    if (coeffs(j) == 0.0) continue;
    if (rules_[j].distance(x) <= threshold_ * rules_[j].regular_spacing()) {
      std::ostringstream msg;
      msg << "potential: point (" << x.transpose() << ") too close to the surface for the regular rule";
      throw DomainError(msg.str());
    }
    u += coeffs(j) * rules_[j].regular(x);
  }
  return u;
}

std::vector<double> PotentialEvaluator::operator()(const Eigen::VectorXd& coeffs, const std::vector<Vec3>& xs) const {
  std::vector<double> out(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) out[k] = (*this)(coeffs, xs[k]);
  return out;
}

std::vector<Vec3> fibonacci_sphere(int n, double radius) {
  if (n < 1) throw ArgumentError("sphere: need at least one point");
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> pts;
  pts.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * k;
    pts.emplace_back(radius * r * std::cos(phi), radius * r * std::sin(phi), radius * z);
  }
  return pts;
}

std::vector<Vec3> sphere_sample(int m) {
  if (m < 1 || m > 20) throw ArgumentError("sphere_sample: level must lie in [1,20]");
  return fibonacci_sphere(1 << (m + 2), 10.0);
}

SphereErrors sphere_errors(const std::vector<double>& error, double radius) {
  SphereErrors out;
  if (error.empty()) return out;
  double ss = 0.0;
  for (double e : error) {
    out.max_abs = std::max(out.max_abs, std::abs(e));
    ss += e * e;
  }
  out.l2 = std::sqrt(ss / error.size()) * std::sqrt(4.0 * M_PI * radius * radius);
  return out;
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& h) {
  if (errors.size() != h.size() || errors.size() < 2) throw ArgumentError("eoc: need two or more matching values");
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    if (!(errors[k] > 0.0) || !(h[k] > 0.0) || !(h[k + 1] > 0.0) || errors[k + 1] < 0.0)
      throw ArgumentError("eoc: errors and mesh sizes must be positive");
    if (errors[k + 1] == 0.0) {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    out.push_back(std::log(errors[k] / errors[k + 1]) / std::log(h[k] / h[k + 1]));
  }
  return out;
}

}  // namespace igabem
