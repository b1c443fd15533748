#pragma once

#include <span>
#include <vector>

namespace igabem {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1,1] (1 <= n <= 128), cached.
const GaussRule& gauss_legendre(int n);

// Composite panels on [a,b] graded toward the complex point c + i*w: each panel
// is at most as long as its distance to that point. Returned as breakpoints.
std::vector<double> graded_panels(double a, double b, double c, double w);

}  // namespace igabem
