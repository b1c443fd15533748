#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>
#include <string>
#include <vector>

#include "igabem/knot_vector.hpp"
#include "igabem/tensor_space.hpp"

namespace igabem {

using Vec3 = Eigen::Vector3d;
using Param = std::array<double, 2>;

// Point, partial derivatives up to a requested order and the area element.
struct SurfaceSample {
  // Position of d^{k+l} F / dt1^k dt2^l in `partials`.
  static constexpr int index(int k, int l) { return (k + l) * (k + l + 1) / 2 + l; }

  std::array<Vec3, 10> partials;
  int order = 0;
  double jacobian = 0.0;  // || F_t1 x F_t2 ||

  const Vec3& point() const { return partials[0]; }
  const Vec3& du() const { return partials[1]; }
  const Vec3& dv() const { return partials[2]; }
  const Vec3& partial(int k, int l) const { return partials[index(k, l)]; }
};

// Single-patch rational tensor-product surface F : R -> R^3.
class NurbsSurface {
 public:
  struct ControlPoint {
    Vec3 x;
    double w = 1.0;
  };

  NurbsSurface() = default;
  // net[i * n2 + j] is Q_{i,j} with i along the first parametric direction.
  NurbsSurface(KnotVector u, KnotVector v, std::vector<ControlPoint> net,
               std::array<bool, 2> periodic = {false, false});

  const KnotVector& knots(int dir) const { return kv_[dir]; }
  int degree(int dir) const { return kv_[dir].degree(); }
  int net_size(int dir) const { return kv_[dir].dimension(); }
  const ControlPoint& control(int i, int j) const { return net_[i * net_size(1) + j]; }
  bool periodic(int dir) const { return periodic_[dir]; }
  Rect domain() const;
  double period(int dir) const { return kv_[dir].back() - kv_[dir].front(); }

  // Rational partial derivatives up to max_deriv (<= 3).
  SurfaceSample eval(Param t, int max_deriv = 1) const;
  Vec3 point(Param t) const { return eval(t, 0).point(); }

  // Maps periodic directions back into the parametric domain.
  Param wrap(Param t) const;

 private:
  std::array<KnotVector, 2> kv_;
  std::vector<ControlPoint> net_;
  std::array<bool, 2> periodic_{false, false};
};

// Torus with major radius `major` and minor radius `minor` on [-3,3] x [-1,1],
// built as the product of two four-arc rational quadratic circles whose seams
// sit at angle pi (so t1 = +-3 is the circle x < 0 through (-major, 0, 0)).
NurbsSurface make_torus(double major = 3.0, double minor = 1.0);

// Saddle (t1, t2, t1^2 - t2^2) on [-1,1]^2 as a biquadratic Bezier patch.
NurbsSurface make_saddle_screen();

// Geometry files: {"degrees":[d1,d2], "knots_u":[..], "knots_v":[..],
// "control_points":[[[x,y,z,w], ...n2], ...n1], "periodic":[b1,b2]}.
NurbsSurface load_geometry(const std::string& path);
NurbsSurface parse_geometry(const std::string& json_text);
std::string geometry_to_json(const NurbsSurface& surface);

}  // namespace igabem
