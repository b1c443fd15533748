#include "igabem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>

#include "igabem/errors.hpp"

namespace igabem {

void CubatureConfig::validate() const {
  for (int k = 0; k < 2; ++k) {
    if (p[k] < 0 || p[k] > 6 || q[k] < 0 || q[k] > 6) throw ConfigError("cubature: QI degrees must lie in [0,6]");
    if (nodes_singular < p[k] + 2) throw ConfigError("cubature: qi_nodes_singular must be at least p+2");
    if (nodes_regular < q[k] + 2) throw ConfigError("cubature: qi_nodes_regular must be at least q+2");
  }
  if (taylor_terms < 1 || taylor_terms > 3) throw ConfigError("cubature: taylor_terms must be 1, 2 or 3");
  if (!(eta >= 0.0)) throw ConfigError("cubature: eta must be nonnegative");
  if (!(near_threshold > 0.0)) throw ConfigError("cubature: near_threshold must be positive");
}

AssemblyCounters& AssemblyCounters::operator+=(const AssemblyCounters& o) {
  singular += o.singular;
  near_singular += o.near_singular;
  regular += o.regular;
  moment_tables += o.moment_tables;
  return *this;
}

Param unwrap_toward(const NurbsSurface& surface, Param s, const Rect& r) {
  for (int k = 0; k < 2; ++k) {
    if (!surface.periodic(k)) continue;
    const double L = surface.period(k);
    auto gap = [&](double x) { return std::max({r.lo[k] - x, 0.0, x - r.hi[k]}); };
    double best = s[k];
    for (int m = -1; m <= 1; ++m)
      if (gap(s[k] + m * L) < gap(best)) best = s[k] + m * L;
    s[k] = best;
  }
  return s;
}

namespace {

std::vector<double> product_integrals(const KnotVector& kv) {
  std::vector<double> out(kv.dimension());
  for (int i = 0; i < kv.dimension(); ++i) out[i] = bspline_definite_integral(kv, i);
  return out;
}

int element_count(const KnotVector& kv) { return static_cast<int>(kv.breakpoints().size()) - 1; }

// QI on [lo, hi] that is uniform between consecutive cuts, with the pieces joined
// by full multiplicity knots. Node spacing follows `nodes` over the whole interval.
struct PiecewiseQi {
  KnotVector knots;
  Eigen::MatrixXd matrix;  // dimension x nodes
  std::vector<double> nodes;
};

PiecewiseQi piecewise_qi(int degree, double lo, double hi, int nodes, const std::vector<double>& cuts) {
  std::vector<double> ends{lo};
  for (double c : cuts) ends.push_back(c);
  ends.push_back(hi);
  std::vector<QiOperator> ops;
  int dim = 0, count = 0;
  for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
    const double frac = (ends[i + 1] - ends[i]) / (hi - lo);
    const int n = std::max(degree + 2, static_cast<int>(std::lround((nodes - 1) * frac)) + 1);
    ops.emplace_back(degree, ends[i], ends[i + 1], n);
    dim += ops.back().dimension();
    count += n;
  }
  PiecewiseQi out;
  out.matrix = Eigen::MatrixXd::Zero(dim, count);
  std::vector<double> k;
  int r = 0, c = 0;
  for (const auto& op : ops) {
    out.matrix.block(r, c, op.dimension(), op.node_count()) = op.matrix();
    r += op.dimension();
    c += op.node_count();
    for (int i = 0; i < op.node_count(); ++i) out.nodes.push_back(op.node(i));
    const auto& ok = op.knots().knots();
    k.insert(k.end(), ok.begin() + (k.empty() ? 0 : degree + 1), ok.end());
  }
  out.knots = KnotVector(std::move(k), degree);
  return out;
}

std::vector<double> geometric_cuts(const NurbsSurface& surface, int k, double lo, double hi, bool split) {
  std::vector<double> cuts;
  if (!split) return cuts;
  const double tol = 1e-12 * (hi - lo);
  for (double t : surface.knots(k).breakpoints())
    if (t > lo + tol && t < hi - tol) cuts.push_back(t);
  return cuts;
}

}  // namespace

ColumnRule::ColumnRule(const NurbsSurface& surface, const Rect& support, Spline1D b1, Spline1D b2,
                       const CubatureConfig& config, const DensityFn& density)
    : support_(support) {
  const std::array<const Spline1D*, 2> b{&b1, &b2};
  std::array<KnotVector, 2> prod;
  std::array<std::vector<double>, 2> rnodes;
  for (int k = 0; k < 2; ++k) {
    const auto cuts = geometric_cuts(surface, k, support.lo[k], support.hi[k], config.split_geometric);
    const auto op = piecewise_qi(config.p[k], support.lo[k], support.hi[k], config.nodes_singular, cuts);
    prod[k] = product_knots(op.knots, b[k]->knots);
    const Eigen::MatrixXd M = product_matrix(op.knots, *b[k], prod[k]);
    A_[k] = op.matrix.transpose() * M;
    snodes_[k] = op.nodes;

    const auto opr = piecewise_qi(config.q[k], support.lo[k], support.hi[k], config.nodes_regular, cuts);
    const KnotVector pr = product_knots(opr.knots, b[k]->knots);
    const Eigen::MatrixXd Mr = product_matrix(opr.knots, *b[k], pr);
    const auto I = product_integrals(pr);
    const Eigen::VectorXd v = Mr * Eigen::Map<const Eigen::VectorXd>(I.data(), I.size());
    const Eigen::VectorXd w = opr.matrix.transpose() * v;
    rweights_[k].assign(w.data(), w.data() + w.size());
    rnodes[k] = opr.nodes;
  }
  moments_ = MomentBasis(prod[0], prod[1]);

  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
  auto sample = [&](Param t, std::vector<Vec3>& xs, std::vector<double>& ws) {
    const auto S = surface.eval(t, 1);
    xs.push_back(S.point());
    ws.push_back(S.jacobian * (density ? density(t) : 1.0));
    lo = lo.cwiseMin(S.point());
    hi = hi.cwiseMax(S.point());
  };
  for (double t1 : snodes_[0])
    for (double t2 : snodes_[1]) sample({t1, t2}, sx_, sw_);
  for (double t1 : rnodes[0])
    for (double t2 : rnodes[1]) sample({t1, t2}, rx_, rw_);
  const int nel = std::max(element_count(b1.knots), element_count(b2.knots));
  h_loc_ = (hi - lo).norm() / nel;
  h_reg_ = (hi - lo).norm() / static_cast<double>(std::max(rnodes[0].size(), rnodes[1].size()) - 1);
}

double ColumnRule::distance(const Vec3& x) const {
  double d2 = std::numeric_limits<double>::infinity();
  for (const auto& y : sx_) d2 = std::min(d2, (y - x).squaredNorm());
  for (const auto& y : rx_) d2 = std::min(d2, (y - x).squaredNorm());
  return std::sqrt(d2);
}

Classification ColumnRule::classify(const NurbsSurface& surface, Param s, const Vec3& x, double threshold) const {
  Classification c;
  c.source = unwrap_toward(surface, s, support_);
  const double tol = 1e-12 * std::max(support_.width(0), support_.width(1));
  if (support_.contains(c.source, tol)) {
    c.kind = EntryClass::Singular;
    return c;
  }
  c.ratio = distance(x) / h_loc_;
  c.kind = c.ratio <= threshold ? EntryClass::NearSingular : EntryClass::Regular;
  return c;
}

double ColumnRule::singular(const KernelExpansion& exp) const {
  const int n1 = static_cast<int>(snodes_[0].size()), n2 = static_cast<int>(snodes_[1].size());
  const double tiny = 1e-10 * std::max(support_.width(0), support_.width(1));
  Eigen::MatrixXd f(n1, n2);
  for (int a = 0; a < n1; ++a) {
    for (int b = 0; b < n2; ++b) {
      const Param t{snodes_[0][a], snodes_[1][b]};
      const std::size_t idx = static_cast<std::size_t>(a) * n2 + b;
      const bool at_source = std::abs(t[0] - exp.source[0]) <= tiny && std::abs(t[1] - exp.source[1]) <= tiny;
      f(a, b) = sw_[idx] * (at_source ? 1.0 : eval_rho(exp, t, sx_[idx]));
    }
  }
  const Eigen::MatrixXd coeffs = A_[0].transpose() * f * A_[1];
  const Eigen::MatrixXd mu = modified_moments(exp, moments_);
  return coeffs.cwiseProduct(mu).sum();
}

double ColumnRule::regular(const Vec3& x) const {
  const int n1 = static_cast<int>(rweights_[0].size()), n2 = static_cast<int>(rweights_[1].size());
  double sum = 0.0;
  for (int a = 0; a < n1; ++a) {
    double row = 0.0;
    for (int b = 0; b < n2; ++b) {
      const std::size_t idx = static_cast<std::size_t>(a) * n2 + b;
      row += rweights_[1][b] * rw_[idx] * laplace_kernel(x, rx_[idx]);
    }
    sum += rweights_[0][a] * row;
  }
  return sum;
}

ColumnRule make_trial_rule(const NurbsSurface& surface, const TensorSplineSpace& space, int j,
                           const CubatureConfig& config) {
  const auto [i1, i2] = space.split(j);
  Spline1D b1 = unit_bspline(space.knots(0), i1);
  Spline1D b2 = unit_bspline(space.knots(1), i2);
  const Rect r{{b1.lower(), b2.lower()}, {b1.upper(), b2.upper()}};
  return ColumnRule(surface, r, std::move(b1), std::move(b2), config);
}

std::vector<double> collocation_abscissas(const KnotVector& kv, bool improved, double beta,
                                          const std::vector<double>& breaks) {
  if (breaks.empty()) return greville_points(kv, improved, beta);
  std::vector<double> bs = breaks;
  bs.push_back(kv.front());
  bs.push_back(kv.back());
  std::sort(bs.begin(), bs.end());
  bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
  const int d = kv.degree();
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < bs.size(); ++i) {
    const double a = bs[i], b = bs[i + 1];
    if (a < kv.front() || b > kv.back()) throw ConfigError("collocation: sub-patch break outside the domain");
    if (kv.multiplicity(a) < d + 1 || kv.multiplicity(b) < d + 1)
      throw ConfigError("collocation: sub-patch breaks need full knot multiplicity");
    std::vector<double> local(d + 1, a);
    for (double t : kv.knots())
      if (t > a && t < b) local.push_back(t);
    local.insert(local.end(), d + 1, b);
    const auto g = greville_points(KnotVector(std::move(local), d), improved, beta);
    out.insert(out.end(), g.begin(), g.end());
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(out[i] > out[i - 1])) throw ConfigError("collocation: coincident collocation abscissas");
  return out;
}

std::vector<Param> collocation_points(const TensorSplineSpace& space, bool improved, double beta,
                                      const std::array<std::vector<double>, 2>& breaks) {
  const auto g1 = collocation_abscissas(space.knots(0), improved, beta, breaks[0]);
  const auto g2 = collocation_abscissas(space.knots(1), improved, beta, breaks[1]);
  std::vector<Param> pts;
  pts.reserve(g1.size() * g2.size());
  for (double t2 : g2)
    for (double t1 : g1) pts.push_back({t1, t2});
  return pts;
}

namespace {

struct RowData {
  std::vector<Vec3> xs;
  std::vector<KernelExpansion> exps;
};

RowData prepare_rows(const NurbsSurface& surface, const std::vector<Param>& points, const CubatureConfig& config) {
  RowData r;
  r.xs.reserve(points.size());
  r.exps.reserve(points.size());
  for (const auto& s : points) {
    r.exps.push_back(build_expansion(surface, s, config.taylor_terms, config.eta));
    r.xs.push_back(r.exps.back().point);
  }
  return r;
}

double dispatch(const ColumnRule& rule, const NurbsSurface& surface, const KernelExpansion& exp, const Vec3& x,
                const CubatureConfig& config, AssemblyCounters& counters, EntryClass* kind) {
  const auto c = rule.classify(surface, exp.source, x, config.near_threshold);
  if (kind) *kind = c.kind;
  switch (c.kind) {
    case EntryClass::Singular:
    case EntryClass::NearSingular: {
      (c.kind == EntryClass::Singular ? counters.singular : counters.near_singular)++;
      counters.moment_tables++;
      const Param delta{c.source[0] - exp.source[0], c.source[1] - exp.source[1]};
      return rule.singular(delta[0] == 0.0 && delta[1] == 0.0 ? exp : exp.shifted(delta));
    }
    case EntryClass::Regular:
      counters.regular++;
      return rule.regular(x);
  }
  return 0.0;
}

// Runs body(k) for k in [0,n), in parallel when available, rethrowing the first error.
template <class Body>
void parallel_for(int n, Body&& body) {
  std::exception_ptr error;
  std::mutex mutex;
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < n; ++k) {
    try {
      body(k);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

CollocationSystem assemble_matrix(const NurbsSurface& surface, const TensorSplineSpace& space,
                                  const std::vector<Param>& points, const CubatureConfig& config) {
  config.validate();
  const int rows = static_cast<int>(points.size()), cols = space.dimension();
  if (rows < cols) throw ConfigError("assembly: fewer collocation points than trial functions");
  const auto rd = prepare_rows(surface, points, config);
  CollocationSystem sys;
  sys.A.resize(rows, cols);
  sys.points = points;
  sys.xs = rd.xs;
  sys.classes.assign(static_cast<std::size_t>(rows) * cols, EntryClass::Regular);
  std::vector<AssemblyCounters> per_col(cols);
  parallel_for(cols, [&](int j) {
    const auto rule = make_trial_rule(surface, space, j, config);
    for (int i = 0; i < rows; ++i) {
      EntryClass kind;
      sys.A(i, j) = dispatch(rule, surface, rd.exps[i], rd.xs[i], config, per_col[j], &kind);
      sys.classes[static_cast<std::size_t>(i) * cols + j] = kind;
    }
  });
  for (const auto& c : per_col) sys.counters += c;
  if (!sys.A.allFinite()) throw SolverError("assembly: non-finite matrix entry");
  return sys;
}

Eigen::VectorXd density_rhs(const NurbsSurface& surface, const TensorSplineSpace& space,
                            const std::vector<Param>& points, const DensityFn& psi, const CubatureConfig& config,
                            AssemblyCounters* counters) {
  config.validate();
  const auto rd = prepare_rows(surface, points, config);
  const auto e1 = space.knots(0).breakpoints(), e2 = space.knots(1).breakpoints();
  const int n1 = static_cast<int>(e1.size()) - 1, n2 = static_cast<int>(e2.size()) - 1;
  const int rows = static_cast<int>(points.size());
  Eigen::MatrixXd parts(rows, n1 * n2);
  std::vector<AssemblyCounters> per_elem(n1 * n2);
  parallel_for(n1 * n2, [&](int e) {
    const int a = e % n1, b = e / n1;
    Spline1D b1{KnotVector({e1[a], e1[a + 1]}, 0), {1.0}};
    Spline1D b2{KnotVector({e2[b], e2[b + 1]}, 0), {1.0}};
    const Rect r{{e1[a], e2[b]}, {e1[a + 1], e2[b + 1]}};
    const ColumnRule rule(surface, r, std::move(b1), std::move(b2), config, psi);
    for (int i = 0; i < rows; ++i) parts(i, e) = dispatch(rule, surface, rd.exps[i], rd.xs[i], config, per_elem[e], nullptr);
  });
  if (counters)
    for (const auto& c : per_elem) *counters += c;
  Eigen::VectorXd g = parts.rowwise().sum();
  if (!g.allFinite()) throw SolverError("assembly: non-finite right-hand side");
  return g;
}

double assemble_entry(const NurbsSurface& surface, const TensorSplineSpace& space, Param s, int j,
                      const CubatureConfig& config, Classification* cls) {
  config.validate();
  const auto rule = make_trial_rule(surface, space, j, config);
  const auto exp = build_expansion(surface, s, config.taylor_terms, config.eta);
  const auto c = rule.classify(surface, s, exp.point, config.near_threshold);
  if (cls) *cls = c;
  if (c.kind == EntryClass::Regular) return rule.regular(exp.point);
  return rule.singular(exp.shifted({c.source[0] - s[0], c.source[1] - s[1]}));
}

}  // namespace igabem
