#pragma once

#include <Eigen/Core>
#include <array>
#include <span>
#include <vector>

#include "igabem/knot_vector.hpp"
#include "igabem/nurbs_surface.hpp"
#include "igabem/tensor_space.hpp"

namespace igabem {

inline constexpr double kInvFourPi = 0.25 / M_PI;

// Laplace single-layer kernel 1 / (4 pi |x - y|).
inline double laplace_kernel(const Vec3& x, const Vec3& y) { return kInvFourPi / (x - y).norm(); }

// Homogeneous polynomial sum_i c[i] u^{deg-i} v^i.
struct HomogeneousPoly {
  int degree = 0;
  std::vector<double> c;

  double eval(double u, double v) const;
  static HomogeneousPoly zero(int degree) { return {degree, std::vector<double>(degree + 1, 0.0)}; }
};

HomogeneousPoly operator*(const HomogeneousPoly& a, const HomogeneousPoly& b);
HomogeneousPoly operator+(const HomogeneousPoly& a, const HomogeneousPoly& b);
HomogeneousPoly operator*(double s, const HomogeneousPoly& a);

// Taylor-based reference kernel at a source s:
//   K(s,t) = 1/(4 pi) ( sum_{l=1..n} P^{-(2l-1)/2} P_{3l-3} + eta |t-s|^2 )   (eta only for n > 1)
// with P the first fundamental form at s and (u,v) = t - s.
struct KernelExpansion {
  Param source{};
  Vec3 point = Vec3::Zero();  // F(s)
  int order = 1;
  double E = 1.0, F = 0.0, G = 1.0;
  HomogeneousPoly p3 = HomogeneousPoly::zero(3);
  HomogeneousPoly p6 = HomogeneousPoly::zero(6);
  double eta = 0.0;

  double quadratic_form(double u, double v) const { return E * u * u + 2.0 * F * u * v + G * v * v; }
  // Homogeneous pieces 1/(4pi) P^{-(2l-1)/2} P_{3l-3} at (u,v) for l = 1..3 (zeros beyond order).
  void pieces(double u, double v, double out[3]) const;
  // Coefficient of |t-s|^2 in K, including the 1/(4 pi) factor.
  double effective_eta() const { return order > 1 ? kInvFourPi * eta : 0.0; }
  // Same expansion with the source translated by a period (periodic unwrapping).
  KernelExpansion shifted(Param delta) const;
};

KernelExpansion build_expansion(const NurbsSurface& surface, Param s, int n, double eta);

// K_F(s, t); throws DomainError at t = s.
double eval_kf(const KernelExpansion& exp, Param t);

// U(F(s), F(t)) / K_F(s, t), with the limit 1 at t = s. t is expressed in the
// (possibly unwrapped) coordinates of exp.source.
double eval_rho(const KernelExpansion& exp, const NurbsSurface& surface, Param t);
// Same with F(t) already known.
double eval_rho(const KernelExpansion& exp, Param t, const Vec3& x_t);

// int_rect (t1-s1)^a (t2-s2)^b P^{-(2l-1)/2} dt for the quadratic form (E,F,G).
double monomial_kernel_integral(int a, int b, int ell, double E, double F, double G, const Rect& rect,
                                Param s);

// out[a*(deg2+1)+b] = int_elem xi^a eta^b K_F dt, where xi, eta are the element
// coordinates scaled to [-1,1].
void element_moments(const KernelExpansion& exp, const Rect& elem, int deg1, int deg2, std::span<double> out);

// Piecewise-monomial description of a tensor spline basis, reused for every
// source: per direction, the local Taylor coefficients of each basis function
// on each element of its support.
class MomentBasis {
 public:
  MomentBasis() = default;
  MomentBasis(KnotVector u, KnotVector v);

  const KnotVector& knots(int dir) const { return kv_[dir]; }
  int elements(int dir) const { return static_cast<int>(elem_[dir].size()); }
  std::array<double, 2> element(int dir, int e) const { return elem_[dir][e]; }
  int degree(int dir) const { return kv_[dir].degree(); }

  // Coefficient of xi^a for basis k on element e.
  double coeff(int dir, int k, int e, int a) const {
    return conv_[dir][(static_cast<std::size_t>(k) * elements(dir) + e) * (degree(dir) + 1) + a];
  }
  const std::vector<int>& support(int dir, int k) const { return supp_[dir][k]; }

 private:
  std::array<KnotVector, 2> kv_;
  std::array<std::vector<std::array<double, 2>>, 2> elem_;
  std::array<std::vector<double>, 2> conv_;
  std::array<std::vector<std::vector<int>>, 2> supp_;
};

// mu(k1,k2) = int K_F(s,t) B_k1(t1) B_k2(t2) dt over the product-space basis.
Eigen::MatrixXd modified_moments(const KernelExpansion& exp, const MomentBasis& basis);
Eigen::MatrixXd modified_moments(const KernelExpansion& exp, const KnotVector& u, const KnotVector& v);

}  // namespace igabem
