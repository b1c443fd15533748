#include "igabem/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "igabem/dense_linalg.hpp"
#include "igabem/errors.hpp"
#include "igabem/potential.hpp"
#include "json.hpp"

namespace igabem {

const char* problem_name(Problem p) {
  switch (p) {
    case Problem::Screen: return "screen";
    case Problem::TorusDensity: return "torus_density";
    case Problem::TorusPotential: return "torus_potential";
  }
  return "?";
}

ExperimentConfig default_config(Problem problem) {
  ExperimentConfig c;
  c.problem = problem;
  c.cubature.eta = 1.0;
  switch (problem) {
    case Problem::Screen:
      c.levels = {1, 2, 3, 4, 5};
      c.cubature.p = {2, 2};
      c.cubature.q = {4, 4};
      c.cubature.nodes_singular = 7;
      c.cubature.nodes_regular = 7;
      c.cubature.taylor_terms = 3;
      break;
    case Problem::TorusDensity:
      c.levels = {1, 2, 3};
      c.cubature.p = {2, 2};
      c.cubature.q = {4, 4};
      c.cubature.nodes_singular = 13;
      c.cubature.nodes_regular = 7;
      c.cubature.taylor_terms = 2;
      break;
    case Problem::TorusPotential:
      c.levels = {1, 2, 3, 4};
      c.cubature.p = {2, 2};
      c.cubature.q = {2, 2};
      c.cubature.nodes_singular = 7;
      c.cubature.nodes_regular = 13;
      c.cubature.taylor_terms = 2;
      c.continuity = Continuity::C0;
      c.extra_knots = {-2.25, 2.25};
      break;
  }
  return c;
}

ExperimentConfig parse_experiment(const std::string& json_text, const std::string& base_dir) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  if (!j.contains("problem")) throw ConfigError("config: missing field 'problem'");
  static const char* known[] = {"problem", "levels", "d", "p", "q", "qi_nodes_singular", "qi_nodes_regular",
                                "taylor_terms", "eta", "greville_improved", "greville_beta", "near_threshold",
                                "split_geometric", "continuity", "output", "geometry", "extra_knots", "condition",
                                "sphere_output"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
      throw ConfigError("config: unknown field '" + key + "'");
  }
  std::string field;
  try {
    field = "problem";
    const auto name = j.at("problem").get<std::string>();
    Problem problem;
    if (name == "screen") problem = Problem::Screen;
    else if (name == "torus_density") problem = Problem::TorusDensity;
    else if (name == "torus_potential") problem = Problem::TorusPotential;
    else throw ConfigError("config: field 'problem' must be screen, torus_density or torus_potential");
    ExperimentConfig c = default_config(problem);
    auto pair = [&](const char* name, std::array<int, 2>& out) {
      field = name;
      if (!j.contains(name)) return;
      const auto v = j.at(name).get<std::vector<int>>();
      if (v.size() != 2) throw ConfigError(std::string("config: field '") + name + "' needs two entries");
      out = {v[0], v[1]};
    };
    field = "levels";
    if (j.contains("levels")) {
      if (j.at("levels").is_number_integer()) {
        const int n = j.at("levels").get<int>();
        if (n < 1) throw ConfigError("config: field 'levels' must be positive");
        c.levels.clear();
        for (int k = 1; k <= n; ++k) c.levels.push_back(k);
      } else {
        c.levels = j.at("levels").get<std::vector<int>>();
      }
      if (c.levels.empty()) throw ConfigError("config: field 'levels' is empty");
      const int lowest = problem == Problem::Screen ? 0 : 1;
      for (std::size_t k = 0; k < c.levels.size(); ++k) {
        if (c.levels[k] < lowest || c.levels[k] > 12) throw ConfigError("config: field 'levels' out of range");
        if (k > 0 && c.levels[k] <= c.levels[k - 1]) throw ConfigError("config: field 'levels' must increase");
      }
    }
    pair("d", c.d);
    pair("p", c.cubature.p);
    pair("q", c.cubature.q);
    auto get = [&](const char* name, auto& out) {
      field = name;
      if (j.contains(name)) out = j.at(name).get<std::decay_t<decltype(out)>>();
    };
    get("qi_nodes_singular", c.cubature.nodes_singular);
    get("qi_nodes_regular", c.cubature.nodes_regular);
    get("taylor_terms", c.cubature.taylor_terms);
    get("eta", c.cubature.eta);
    get("near_threshold", c.cubature.near_threshold);
    get("split_geometric", c.cubature.split_geometric);
    get("greville_improved", c.greville_improved);
    get("greville_beta", c.greville_beta);
    get("extra_knots", c.extra_knots);
    get("condition", c.compute_condition);
    get("output", c.output);
    get("sphere_output", c.sphere_output);
    get("geometry", c.geometry);
    field = "continuity";
    if (j.contains("continuity")) {
      const auto v = j.at("continuity").get<std::string>();
      if (v == "max_mult") c.continuity = Continuity::MaxMultiplicity;
      else if (v == "c0") c.continuity = Continuity::C0;
      else throw ConfigError("config: field 'continuity' must be max_mult or c0");
    }
    if (!c.geometry.empty() && std::filesystem::path(c.geometry).is_relative())
      c.geometry = (std::filesystem::path(base_dir) / c.geometry).string();
    field = "d";
    if (c.d[0] < 1 || c.d[1] < 1 || c.d[0] > 4 || c.d[1] > 4) throw ConfigError("config: field 'd' must lie in [1,4]");
    c.cubature.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError("config: field '" + field + "' has the wrong type: " + e.what());
  }
}

ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment(ss.str(), std::filesystem::path(path).parent_path().string());
}

NurbsSurface experiment_surface(const ExperimentConfig& config) {
  if (!config.geometry.empty()) return load_geometry(config.geometry);
  return config.problem == Problem::Screen ? make_saddle_screen() : make_torus(3.0, 1.0);
}

namespace {

bool is_torus(const ExperimentConfig& c) { return c.problem != Problem::Screen; }

std::vector<double> interior_breaks(const KnotVector& kv) {
  auto bp = kv.breakpoints();
  return std::vector<double>(bp.begin() + 1, bp.end() - 1);
}

// Clamped knot vector on [a,b] with the given interior knots at multiplicity `mult`
// and the extra knots simple.
KnotVector build_knots(double a, double b, int d, const std::vector<double>& geometric, int mult,
                       const std::vector<double>& extra) {
  std::vector<double> k(d + 1, a);
  for (double x : geometric) k.insert(k.end(), mult, x);
  for (double x : extra) {
    if (!(x > a && x < b)) throw ConfigError("config: extra knot outside the parameter interval");
    k.push_back(x);
  }
  k.insert(k.end(), d + 1, b);
  std::sort(k.begin(), k.end());
  return KnotVector(std::move(k), d);
}

TensorSplineSpace initial_space(const ExperimentConfig& c, Continuity cont) {
  const NurbsSurface surface = experiment_surface(c);
  std::array<KnotVector, 2> kv;
  for (int dir = 0; dir < 2; ++dir) {
    const auto& g = surface.knots(dir);
    std::vector<double> extra;
    if (c.problem == Problem::TorusDensity && dir == 0) extra = {-2.5, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 2.5};
    if (c.problem == Problem::TorusPotential && dir == 0) extra = c.extra_knots;
    const int mult = cont == Continuity::MaxMultiplicity ? c.d[dir] + 1 : c.d[dir];
    kv[dir] = build_knots(g.front(), g.back(), c.d[dir], is_torus(c) ? interior_breaks(g) : std::vector<double>{},
                          mult, extra);
  }
  return TensorSplineSpace(kv[0], kv[1]);
}

int refinements(const ExperimentConfig& c, int level) { return c.problem == Problem::Screen ? level : level - 1; }

TensorSplineSpace space_with(const ExperimentConfig& c, int level, Continuity cont) {
  auto s = initial_space(c, cont);
  for (int k = 0; k < refinements(c, level); ++k) s = refine_dyadic(s);
  return s;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

TensorSplineSpace experiment_space(const ExperimentConfig& config, int level) {
  return space_with(config, level, config.continuity);
}

std::vector<Param> experiment_points(const ExperimentConfig& config, int level) {
  const bool improved = config.greville_improved;
  const double beta = config.greville_beta;
  if (!is_torus(config) || (config.problem == Problem::TorusPotential && config.continuity == Continuity::C0))
    return collocation_points(experiment_space(config, level), improved, beta);
  // Same number of points in each rational sub-patch, taken from the maximal multiplicity space.
  const NurbsSurface surface = experiment_surface(config);
  const auto full = space_with(config, level, Continuity::MaxMultiplicity);
  return collocation_points(full, improved, beta, {interior_breaks(surface.knots(0)), interior_breaks(surface.knots(1))});
}

LevelResult run_level(const ExperimentConfig& config, const NurbsSurface& surface, int level) {
  const auto space = experiment_space(config, level);
  const auto points = experiment_points(config, level);
  LevelResult r;
  r.level = level;
  r.h = space.mesh_size();
  r.ndof1 = space.dimension(0);
  r.ndof2 = space.dimension(1);
  r.ndof = space.dimension();
  r.rows = static_cast<int>(points.size());

  std::function<double(Param)> psi;
  if (config.problem == Problem::Screen)
    psi = [](Param t) { return std::sqrt(1.0 + 4.0 * t[0] * t[0] - 0.5 * t[1] * t[1]); };
  else if (config.problem == Problem::TorusDensity)
    psi = [](Param t) { return std::sin(4.0 / 3.0 * t[0] * t[1]); };
  const Vec3 nu(-3.0, 0.0, 0.0);
  auto exact_u = [&](const Vec3& x) { return 1.0 / (x - nu).norm(); };

  auto t0 = std::chrono::steady_clock::now();
  auto sys = assemble_matrix(surface, space, points, config.cubature);
  if (psi) {
    sys.rhs = density_rhs(surface, space, points, psi, config.cubature, &sys.counters);
  } else {
    sys.rhs.resize(r.rows);
    for (int i = 0; i < r.rows; ++i) sys.rhs(i) = exact_u(sys.xs[i]);
  }
  r.assembly_ms = elapsed_ms(t0);
  r.counters = sys.counters;

  t0 = std::chrono::steady_clock::now();
  const bool square = r.rows == r.ndof;
  const Eigen::VectorXd alpha = square ? solve_square(sys.A, sys.rhs) : solve_least_squares(sys.A, sys.rhs);
  r.solve_ms = elapsed_ms(t0);

  if (config.compute_condition) r.cond = condition_estimate(sys.A);
  if (config.compute_condition && square) {
    r.min_eig = min_eigenvalue_real_part(sys.A);
    r.min_sym_eig = min_symmetric_eigenvalue(sys.A);
  }

  if (psi) {
    const auto e = density_errors(psi, alpha, surface, space);
    r.err_l2 = e.l2;
    r.err_inf = e.max_abs;
  } else {
    const PotentialEvaluator pot(surface, space, config.cubature);
    r.sphere_points = sphere_sample(level);
    const auto uh = pot(alpha, r.sphere_points);
    for (std::size_t k = 0; k < uh.size(); ++k) r.sphere_error.push_back(exact_u(r.sphere_points[k]) - uh[k]);
    const auto e = sphere_errors(r.sphere_error, 10.0);
    r.err_l2 = e.l2;
    r.err_inf = e.max_abs;
  }
  return r;
}

std::vector<LevelResult> run_experiment(const ExperimentConfig& config, ProgressFn progress) {
  const auto surface = experiment_surface(config);
  std::vector<LevelResult> out;
  for (int level : config.levels) {
    out.push_back(run_level(config, surface, level));
    if (out.size() >= 2) {
      const auto& a = out[out.size() - 2];
      auto& b = out.back();
      b.eoc = eoc({a.err_l2, b.err_l2}, {a.h, b.h})[0];
    }
    if (progress) progress(out.back());
  }
  if (!config.output.empty()) {
    std::ofstream f(config.output);
    if (!f) throw ConfigError("config: cannot write " + config.output);
    write_csv(f, out);
  }
  if (!config.sphere_output.empty() && !out.empty() && !out.back().sphere_points.empty()) {
    std::ofstream f(config.sphere_output);
    if (!f) throw ConfigError("config: cannot write " + config.sphere_output);
    f << "x,y,z,error\n" << std::setprecision(12);
    for (std::size_t k = 0; k < out.back().sphere_points.size(); ++k) {
      const auto& p = out.back().sphere_points[k];
      f << p.x() << ',' << p.y() << ',' << p.z() << ',' << out.back().sphere_error[k] << '\n';
    }
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<LevelResult>& rows) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << "level,h,ndof1,ndof2,ndof,err_l2,err_inf,eoc,cond,assembly_ms,solve_ms\n";
  auto opt = [&](const std::optional<double>& v) {
    if (v) s << *v;
  };
  s << std::setprecision(10);
  for (const auto& r : rows) {
    s << r.level << ',' << r.h << ',' << r.ndof1 << ',' << r.ndof2 << ',' << r.ndof << ',' << r.err_l2 << ',';
    opt(r.err_inf);
    s << ',';
    opt(r.eoc);
    s << ',';
    opt(r.cond);
    s << ',' << std::fixed << std::setprecision(1) << r.assembly_ms << ',' << r.solve_ms << '\n';
    s.unsetf(std::ios::floatfield);
    s << std::setprecision(10);
  }
  out << s.str();
}

}  // namespace igabem
