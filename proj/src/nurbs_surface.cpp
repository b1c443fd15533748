#include "igabem/nurbs_surface.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "igabem/errors.hpp"
#include "json.hpp"

namespace igabem {

namespace {

constexpr double kBinom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};

}  // namespace

NurbsSurface::NurbsSurface(KnotVector u, KnotVector v, std::vector<ControlPoint> net,
                           std::array<bool, 2> periodic)
    : kv_{std::move(u), std::move(v)}, net_(std::move(net)), periodic_(periodic) {
  if (static_cast<int>(net_.size()) != net_size(0) * net_size(1))
    throw GeometryError("nurbs: control net size does not match the knot vectors");
  for (const auto& cp : net_) {
    if (!(cp.w > 0.0)) throw GeometryError("nurbs: weights must be strictly positive");
    if (!cp.x.allFinite()) throw GeometryError("nurbs: non-finite control point");
  }
  if (degree(0) > 7 || degree(1) > 7) throw GeometryError("nurbs: degree above 7 is not supported");
}

Rect NurbsSurface::domain() const {
  return Rect{{kv_[0].front(), kv_[1].front()}, {kv_[0].back(), kv_[1].back()}};
}

Param NurbsSurface::wrap(Param t) const {
  for (int k = 0; k < 2; ++k) {
    if (!periodic_[k]) continue;
    const double a = kv_[k].front(), len = period(k);
    if (t[k] < a || t[k] > kv_[k].back()) {
      double r = std::fmod(t[k] - a, len);
      if (r < 0) r += len;
      t[k] = a + r;
    }
  }
  return t;
}

SurfaceSample NurbsSurface::eval(Param t, int max_deriv) const {
  if (max_deriv < 0 || max_deriv > 3) throw ArgumentError("surface_eval: derivative order must be in [0,3]");
  const int d1 = degree(0), d2 = degree(1);
  const int s1 = kv_[0].find_span(t[0]);
  const int s2 = kv_[1].find_span(t[1]);
  const double u = std::clamp(t[0], kv_[0].front(), kv_[0].back());
  const double v = std::clamp(t[1], kv_[1].front(), kv_[1].back());
  const int n = max_deriv;
  double nu[4 * 8], nv[4 * 8];
  eval_basis_ders(kv_[0], s1, u, n, std::span<double>(nu, (n + 1) * (d1 + 1)));
  eval_basis_ders(kv_[1], s2, v, n, std::span<double>(nv, (n + 1) * (d2 + 1)));

  // Homogeneous derivatives: A (weighted coordinates) and W (weights).
  Vec3 A[4][4];
  double W[4][4];
  for (int k = 0; k <= n; ++k) {
    for (int l = 0; k + l <= n; ++l) {
      Vec3 a = Vec3::Zero();
      double w = 0.0;
      for (int i = 0; i <= d1; ++i) {
        const double bu = nu[k * (d1 + 1) + i];
        if (bu == 0.0) continue;
        for (int j = 0; j <= d2; ++j) {
          const auto& cp = control(s1 - d1 + i, s2 - d2 + j);
          const double b = bu * nv[l * (d2 + 1) + j] * cp.w;
          a += b * cp.x;
          w += b;
        }
      }
      A[k][l] = a;
      W[k][l] = w;
    }
  }
  if (!(W[0][0] > 0.0)) throw GeometryError("surface_eval: vanishing NURBS denominator");

  SurfaceSample out;
  out.order = n;
  Vec3 S[4][4];
  for (int k = 0; k <= n; ++k) {
    for (int l = 0; k + l <= n; ++l) {
      Vec3 r = A[k][l];
      for (int j = 1; j <= l; ++j) r -= kBinom[l][j] * W[0][j] * S[k][l - j];
      for (int i = 1; i <= k; ++i) {
        r -= kBinom[k][i] * W[i][0] * S[k - i][l];
        for (int j = 1; j <= l; ++j) r -= kBinom[k][i] * kBinom[l][j] * W[i][j] * S[k - i][l - j];
      }
      S[k][l] = r / W[0][0];
      out.partials[SurfaceSample::index(k, l)] = S[k][l];
    }
  }
  if (n >= 1) out.jacobian = out.du().cross(out.dv()).norm();
  return out;
}

namespace {

// Four 90-degree rational quadratic arcs of the unit circle, starting at angle -pi.
void unit_circle(std::vector<double>& x, std::vector<double>& y, std::vector<double>& w) {
  const double h = std::sqrt(0.5);
  for (int k = 0; k < 4; ++k) {
    const double a0 = -M_PI + k * M_PI / 2, a1 = a0 + M_PI / 2;
    // Quarter angles: round away the 1e-16 noise of cos/sin.
    auto snap = [](double x) { return std::round(x); };
    const double c0 = snap(std::cos(a0)), s0 = snap(std::sin(a0)), c1 = snap(std::cos(a1)), s1 = snap(std::sin(a1));
    x.insert(x.end(), {c0, c0 + c1, c1});
    y.insert(y.end(), {s0, s0 + s1, s1});
    w.insert(w.end(), {1.0, h, 1.0});
  }
}

std::vector<double> arc_knots(double a, double b) {
  std::vector<double> k;
  for (int i = 0; i <= 4; ++i) {
    const double x = a + (b - a) * i / 4.0;
    k.insert(k.end(), {x, x, x});
  }
  return k;
}

}  // namespace

NurbsSurface make_torus(double major, double minor) {
  std::vector<double> cx, cy, cw;
  unit_circle(cx, cy, cw);
  std::vector<NurbsSurface::ControlPoint> net;
  net.reserve(144);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      const double rho = major + minor * cx[j];
      net.push_back({Vec3(rho * cx[i], rho * cy[i], minor * cy[j]), cw[i] * cw[j]});
    }
  }
  return NurbsSurface(KnotVector(arc_knots(-3.0, 3.0), 2), KnotVector(arc_knots(-1.0, 1.0), 2),
                      std::move(net), {true, true});
}

NurbsSurface make_saddle_screen() {
  const double xs[3] = {-1.0, 0.0, 1.0};
  const double sq[3] = {1.0, -1.0, 1.0};  // Bernstein coefficients of t^2 on [-1,1]
  std::vector<NurbsSurface::ControlPoint> net;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) net.push_back({Vec3(xs[i], xs[j], sq[i] - sq[j]), 1.0});
  const std::vector<double> k{-1, -1, -1, 1, 1, 1};
  return NurbsSurface(KnotVector(k, 2), KnotVector(k, 2), std::move(net));
}

NurbsSurface parse_geometry(const std::string& json_text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("geometry: malformed JSON: ") + e.what());
  }
  auto field = [&](const char* name) -> const json& {
    if (!j.contains(name)) throw ConfigError(std::string("geometry: missing field '") + name + "'");
    return j.at(name);
  };
  try {
    const auto deg = field("degrees").get<std::vector<int>>();
    if (deg.size() != 2) throw ConfigError("geometry: field 'degrees' needs two entries");
    KnotVector u(field("knots_u").get<std::vector<double>>(), deg[0]);
    KnotVector v(field("knots_v").get<std::vector<double>>(), deg[1]);
    const auto& grid = field("control_points");
    std::vector<NurbsSurface::ControlPoint> net;
    if (static_cast<int>(grid.size()) != u.dimension())
      throw ConfigError("geometry: field 'control_points' has the wrong number of rows");
    for (const auto& row : grid) {
      if (static_cast<int>(row.size()) != v.dimension())
        throw ConfigError("geometry: field 'control_points' has a row of the wrong length");
      for (const auto& p : row) {
        const auto c = p.get<std::vector<double>>();
        if (c.size() != 4) throw ConfigError("geometry: control points are [x,y,z,w]");
        net.push_back({Vec3(c[0], c[1], c[2]), c[3]});
      }
    }
    std::array<bool, 2> periodic{false, false};
    if (j.contains("periodic")) {
      const auto p = j.at("periodic").get<std::vector<bool>>();
      if (p.size() != 2) throw ConfigError("geometry: field 'periodic' needs two entries");
      periodic = {p[0], p[1]};
    }
    return NurbsSurface(std::move(u), std::move(v), std::move(net), periodic);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("geometry: wrong field type: ") + e.what());
  }
}

NurbsSurface load_geometry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("geometry: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_geometry(ss.str());
}

std::string geometry_to_json(const NurbsSurface& s) {
  using nlohmann::json;
  auto row = [](const json& v) { return v.dump(); };
  std::ostringstream out;
  out << "{\n  \"degrees\": " << row(json{s.degree(0), s.degree(1)}) << ",\n";
  out << "  \"knots_u\": " << row(json(std::vector<double>(s.knots(0).knots().begin(), s.knots(0).knots().end())))
      << ",\n";
  out << "  \"knots_v\": " << row(json(std::vector<double>(s.knots(1).knots().begin(), s.knots(1).knots().end())))
      << ",\n";
  out << "  \"periodic\": " << row(json{s.periodic(0), s.periodic(1)}) << ",\n";
  out << "  \"control_points\": [\n";
  for (int i = 0; i < s.net_size(0); ++i) {
    out << "    [\n";
    for (int k = 0; k < s.net_size(1); ++k) {
      const auto& cp = s.control(i, k);
      // + 0.0 turns -0.0 into 0.0
      out << "      " << row(json{cp.x.x() + 0.0, cp.x.y() + 0.0, cp.x.z() + 0.0, cp.w}) << (k + 1 < s.net_size(1) ? ",\n" : "\n");
    }
    out << "    ]" << (i + 1 < s.net_size(0) ? ",\n" : "\n");
  }
  out << "  ]\n}";
  return out.str();
}

}  // namespace igabem
