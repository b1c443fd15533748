#include "igabem/tensor_space.hpp"

#include <algorithm>

namespace igabem {

double TensorSplineSpace::mesh_size() const { return std::max(kv_[0].max_gap(), kv_[1].max_gap()); }

Rect TensorSplineSpace::support(int j) const {
  const auto [i1, i2] = split(j);
  return Rect{{kv_[0].support_begin(i1), kv_[1].support_begin(i2)},
              {kv_[0].support_end(i1), kv_[1].support_end(i2)}};
}

Rect TensorSplineSpace::domain() const {
  return Rect{{kv_[0].front(), kv_[1].front()}, {kv_[0].back(), kv_[1].back()}};
}

double TensorSplineSpace::eval(int j, std::array<double, 2> t) const {
  const auto [i1, i2] = split(j);
  double v = 1.0;
  for (int k = 0; k < 2; ++k) {
    const int i = k == 0 ? i1 : i2;
    const auto b = eval_basis(kv_[k], t[k]);
    const int local = i - b.first;
    if (local < 0 || local >= static_cast<int>(b.values.size())) return 0.0;
    v *= b.values[local];
  }
  return v;
}

TensorSplineSpace refine_dyadic(const TensorSplineSpace& space) {
  return TensorSplineSpace(refine_dyadic(space.knots(0)), refine_dyadic(space.knots(1)));
}

}  // namespace igabem
