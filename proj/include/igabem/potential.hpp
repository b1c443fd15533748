#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "igabem/assembly.hpp"
#include "igabem/nurbs_surface.hpp"
#include "igabem/tensor_space.hpp"

namespace igabem {

struct DensityErrors {
  double l2 = 0.0;
  double max_abs = 0.0;  // over the quadrature points
};

// sqrt( int_R (psi(t) - psi_h(t))^2 J(t) dt ), element-wise tensor Gauss.
DensityErrors density_errors(const std::function<double(Param)>& psi, const Eigen::VectorXd& coeffs,
                             const NurbsSurface& surface, const TensorSplineSpace& space, int extra_order = 0);
double density_error_l2(const std::function<double(Param)>& psi, const Eigen::VectorXd& coeffs,
                        const NurbsSurface& surface, const TensorSplineSpace& space, int extra_order = 0);

// psi_h(t) = sum_j coeffs_j B_j(t).
double eval_density(const Eigen::VectorXd& coeffs, const TensorSplineSpace& space, Param t);

// Single-layer potential u_h(x) = int U(x, y) psi_h(y) dS_y, evaluated with the
// regular rule on each trial support. Throws DomainError when x lies within
// near_threshold regular node spacings of a support.
class PotentialEvaluator {
 public:
  PotentialEvaluator(const NurbsSurface& surface, const TensorSplineSpace& space, const CubatureConfig& config);

  double operator()(const Eigen::VectorXd& coeffs, const Vec3& x) const;
  std::vector<double> operator()(const Eigen::VectorXd& coeffs, const std::vector<Vec3>& xs) const;

 private:
  std::vector<ColumnRule> rules_;
  double threshold_;
};

// n quasi-uniform points on the sphere of the given radius (Fibonacci lattice).
std::vector<Vec3> fibonacci_sphere(int n, double radius);
// 2^{m+2} points on the sphere of radius 10.
std::vector<Vec3> sphere_sample(int m);

struct SphereErrors {
  double max_abs = 0.0;
  double l2 = 0.0;  // RMS * sqrt(surface area)
};
SphereErrors sphere_errors(const std::vector<double>& error, double radius);

// log(e_k / e_{k+1}) / log(h_k / h_{k+1}); infinity when e_{k+1} = 0.
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& h);

}  // namespace igabem
