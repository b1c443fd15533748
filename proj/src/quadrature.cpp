#include "igabem/quadrature.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <mutex>

#include "igabem/errors.hpp"

namespace igabem {

namespace {

GaussRule compute_gauss(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > 128) throw ArgumentError("gauss_legendre: n must lie in [1,128]");
  static std::array<std::unique_ptr<GaussRule>, 129> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  if (!cache[n]) cache[n] = std::make_unique<GaussRule>(compute_gauss(n));
  return *cache[n];
}

std::vector<double> graded_panels(double a, double b, double c, double w) {
  w = std::abs(w);
  const double len = b - a;
  const double floor_w = std::max(w, 1e-15 * std::max(1.0, len));
  auto march = [&](double from, double to, int sign, std::vector<double>& out) {
    double x = from;
    while (sign * (to - x) > 0) {
      const double dist = std::hypot(x - c, floor_w);
      double next = x + sign * dist;
      if (sign * (next - to) >= 0 || std::abs(to - next) < 0.25 * dist) next = to;
      out.push_back(next);
      x = next;
    }
  };
  std::vector<double> pts;
  if (c <= a) {
    pts.push_back(a);
    march(a, b, +1, pts);
  } else if (c >= b) {
    std::vector<double> rev{b};
    march(b, a, -1, rev);
    pts.assign(rev.rbegin(), rev.rend());
  } else {
    std::vector<double> left{c};
    march(c, a, -1, left);
    pts.assign(left.rbegin(), left.rend());
    march(c, b, +1, pts);
  }
  return pts;
}

}  // namespace igabem
