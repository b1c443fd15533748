#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "igabem/nurbs_surface.hpp"
#include "igabem/quasi_interp.hpp"
#include "igabem/singular_kernel.hpp"
#include "igabem/spline_product.hpp"
#include "igabem/tensor_space.hpp"

namespace igabem {

struct CubatureConfig {
  std::array<int, 2> p{2, 2};  // QI bidegree for singular and nearly singular entries
  std::array<int, 2> q{2, 2};  // QI bidegree for regular entries
  int nodes_singular = 13;
  int nodes_regular = 7;
  int taylor_terms = 2;
  double eta = 1.0;
  double near_threshold = 2.0;
  // Restart the uniform QI partition at geometric knots inside a support.
  bool split_geometric = true;

  void validate() const;
};

enum class EntryClass : std::uint8_t { Singular, NearSingular, Regular };

struct Classification {
  EntryClass kind = EntryClass::Regular;
  double ratio = 0.0;  // physical distance / local mesh size
  Param source{};      // source unwrapped toward the support
};

struct AssemblyCounters {
  long singular = 0;
  long near_singular = 0;
  long regular = 0;
  long moment_tables = 0;

  AssemblyCounters& operator+=(const AssemblyCounters& o);
};

// Source parameter shifted by whole periods to the representative closest to r.
Param unwrap_toward(const NurbsSurface& surface, Param s, const Rect& r);

// Integrand weight on top of the area element (density for right-hand sides).
using DensityFn = std::function<double(Param)>;

// Cubature data for int_R U(x, F(t)) b1(t1) b2(t2) w(t) J(t) dt over one
// rectangle R (a trial support, or an element for right-hand sides).
class ColumnRule {
 public:
  ColumnRule(const NurbsSurface& surface, const Rect& support, Spline1D b1, Spline1D b2,
             const CubatureConfig& config, const DensityFn& density = nullptr);

  const Rect& support() const { return support_; }
  // Physical diameter of F(R) divided by the number of elements across it.
  double local_size() const { return h_loc_; }
  // Physical diameter of F(R) divided by the number of regular node intervals across it.
  double regular_spacing() const { return h_reg_; }
  // Smallest distance from x to the cached sample points.
  double distance(const Vec3& x) const;

  Classification classify(const NurbsSurface& surface, Param s, const Vec3& x, double threshold) const;
  // exp must be built at the unwrapped source.
  double singular(const KernelExpansion& exp) const;
  double regular(const Vec3& x) const;

 private:
  Rect support_;
  double h_loc_ = 0.0;
  double h_reg_ = 0.0;
  // Singular rule: samples of w J on the node grid, ones mapped to product coefficients.
  std::array<std::vector<double>, 2> snodes_;
  std::vector<Vec3> sx_;
  std::vector<double> sw_;
  std::array<Eigen::MatrixXd, 2> A_;  // nodes x product dimension (QI weights then product)
  MomentBasis moments_;
  // Regular rule: separable weights on the node grid.
  std::array<std::vector<double>, 2> rweights_;
  std::vector<Vec3> rx_;
  std::vector<double> rw_;
};

ColumnRule make_trial_rule(const NurbsSurface& surface, const TensorSplineSpace& space, int j,
                           const CubatureConfig& config);

// Per-direction (improved) Greville abscissas; with `breaks`, computed separately on
// each interval between consecutive breaks (where the space must have full multiplicity).
std::vector<double> collocation_abscissas(const KnotVector& kv, bool improved, double beta,
                                          const std::vector<double>& breaks = {});
// Point i = i2 * n1 + i1.
std::vector<Param> collocation_points(const TensorSplineSpace& space, bool improved, double beta,
                                      const std::array<std::vector<double>, 2>& breaks = {});

struct CollocationSystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd rhs;
  std::vector<Param> points;
  std::vector<Vec3> xs;
  std::vector<EntryClass> classes;  // row-major, rows x cols
  AssemblyCounters counters;

  EntryClass entry_class(int i, int j) const { return classes[static_cast<std::size_t>(i) * A.cols() + j]; }
};

// Matrix assembly, column by column.
CollocationSystem assemble_matrix(const NurbsSurface& surface, const TensorSplineSpace& space,
                                  const std::vector<Param>& points, const CubatureConfig& config);

// g(x_i) = int_R U(x_i, F(t)) psi(t) J(t) dt, with R split into the elements of `space`.
Eigen::VectorXd density_rhs(const NurbsSurface& surface, const TensorSplineSpace& space,
                            const std::vector<Param>& points, const DensityFn& psi, const CubatureConfig& config,
                            AssemblyCounters* counters = nullptr);

// Single entry through the full dispatch (classification + rule).
double assemble_entry(const NurbsSurface& surface, const TensorSplineSpace& space, Param s, int j,
                      const CubatureConfig& config, Classification* cls = nullptr);

}  // namespace igabem
