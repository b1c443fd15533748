#pragma once

#include <functional>
#include <vector>

#include "igabem/nurbs_surface.hpp"
#include "igabem/tensor_space.hpp"

namespace igabem {

// Reference quadratures used by the self-checks and tests. They share no code
// with the cubature rules beyond surface and basis evaluation.

using Integrand2D = std::function<double(Param)>;

// Adaptive tensor Gauss on a rectangle (integrand smooth on it).
double adaptive_gauss_2d(const Integrand2D& f, const Rect& r, double abs_tol, int max_depth = 14);

// int_R f for f weakly singular at s (s anywhere, possibly outside R). R is cut
// along the given breakpoints and through s; cells with a corner at s use a
// Duffy map, the others adaptive Gauss.
double singular_integral_oracle(const Integrand2D& f, const Rect& r, Param s, std::vector<double> breaks1,
                                std::vector<double> breaks2, double rel_tol = 1e-12);

// int_{supp B_j} U(F(s), F(t)) B_j(t) J(t) dt, with periodic unwrapping of s.
double entry_oracle(const NurbsSurface& surface, const TensorSplineSpace& space, Param s, int j,
                    double rel_tol = 1e-12);

}  // namespace igabem
