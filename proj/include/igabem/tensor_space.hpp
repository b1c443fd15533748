#pragma once

#include <array>

#include "igabem/knot_vector.hpp"

namespace igabem {

// Axis-aligned parametric rectangle [lo[0],hi[0]] x [lo[1],hi[1]].
struct Rect {
  std::array<double, 2> lo{};
  std::array<double, 2> hi{};

  double width(int k) const { return hi[k] - lo[k]; }
  bool contains(std::array<double, 2> t, double tol = 0.0) const {
    return t[0] >= lo[0] - tol && t[0] <= hi[0] + tol && t[1] >= lo[1] - tol && t[1] <= hi[1] + tol;
  }
};

// Tensor product S_1 (x) S_2 with flattened index j = i2 * dim1 + i1.
class TensorSplineSpace {
 public:
  TensorSplineSpace() = default;
  TensorSplineSpace(KnotVector u, KnotVector v) : kv_{std::move(u), std::move(v)} {}

  const KnotVector& knots(int dir) const { return kv_[dir]; }
  int dimension(int dir) const { return kv_[dir].dimension(); }
  int dimension() const { return dimension(0) * dimension(1); }
  int index(int i1, int i2) const { return i2 * dimension(0) + i1; }
  std::array<int, 2> split(int j) const { return {j % dimension(0), j / dimension(0)}; }

  double mesh_size() const;
  Rect support(int j) const;
  Rect domain() const;

  // Value of basis function j at t.
  double eval(int j, std::array<double, 2> t) const;

 private:
  std::array<KnotVector, 2> kv_;
};

TensorSplineSpace refine_dyadic(const TensorSplineSpace& space);

}  // namespace igabem
