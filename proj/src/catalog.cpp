#include "lorentz/catalog.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "lorentz/errors.hpp"
#include "lorentz/geometry.hpp"
#include "lorentz/random.hpp"

namespace lorentz {

namespace {

constexpr double kPi = std::numbers::pi;

Box make_box(std::vector<double> lo, std::vector<double> hi) { return Box{std::move(lo), std::move(hi)}; }

Region region_from(Box b, int points = 16) {
  Region r;
  r.box = std::move(b);
  r.point_count = points;
  return r;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::vector<std::string> diagonal_metric(const std::vector<std::string>& diag) {
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) rows.push_back("0");
    rows.push_back(diag[i]);
  }
  return rows;
}

// Sample points of the default region, reused by pointwise facts.
std::vector<Point> fact_points(const Spacetime& st, std::uint64_t seed, int count) {
  Region r = st.region();
  r.points.clear();
  r.point_count = count;
  r.seed = seed;
  return r.sample_points(*st.metric);
}

KnownFact riemann_zero_fact() {
  return {"riemann_zero", "Riemann tensor vanishes (max |component| < 1e-10)",
          [](const Spacetime& st, std::uint64_t seed, int) {
            double worst = 0.0;
            for (const Point& p : fact_points(st, seed, 50)) {
              const LocalGeometry geo = local_geometry(*st.metric, p);
              const int n = geo.dim();
              for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                  for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) worst = std::max(worst, std::abs(geo.riem(i, j, k, l)));
            }
            return FactResult{"riemann_zero", worst < 1e-10, "max |Riem| = " + fmt(worst)};
          }};
}

KnownFact ricci_zero_fact() {
  return {"ricci_zero", "vacuum: Ricci tensor vanishes (max |component| < 1e-7)",
          [](const Spacetime& st, std::uint64_t seed, int) {
            double worst = 0.0;
            for (const Point& p : fact_points(st, seed, 50))
              worst = std::max(worst, local_geometry(*st.metric, p).ricci().cwiseAbs().maxCoeff());
            return FactResult{"ricci_zero", worst < 1e-7, "max |Ric| = " + fmt(worst)};
          }};
}

enum class Cond { E, SE, FP, P, O };

KnownFact condition_fact(Cond c, std::vector<Verdict> expected) {
  static const char* names[] = {"E", "SE", "FP", "P", "O"};
  const std::string name = names[static_cast<int>(c)];
  std::string want;
  for (Verdict v : expected) want += (want.empty() ? "" : " or ") + std::string(to_string(v));
  const std::string id = "condition_" + name;
  return {id, "check " + name + " on the default region: " + want,
          [c, expected, id](const Spacetime& st, std::uint64_t seed, int jobs) {
            Region r = st.region();
            r.seed = seed;
            r.jobs = jobs;
            ConditionReport rep;
            switch (c) {
              case Cond::E: rep = ricci_condition(*st.metric, r, false); break;
              case Cond::SE: rep = ricci_condition(*st.metric, r, true); break;
              case Cond::FP: rep = riem_condition(*st.metric, r, false, false); break;
              case Cond::P: rep = riem_condition(*st.metric, r, true, false); break;
              case Cond::O: rep = tidal_condition(*st.metric, r); break;
            }
            bool ok = false;
            for (Verdict v : expected) ok = ok || rep.verdict == v;
            return FactResult{id, ok, std::string(to_string(rep.verdict)) + ", margin " + fmt(rep.min_margin)};
          }};
}

KnownFact orientation_fact() {
  return {"orientation", "X is timelike on the default region",
          [](const Spacetime& st, std::uint64_t seed, int jobs) {
            Region r = st.region();
            r.seed = seed;
            r.jobs = jobs;
            const ConditionReport rep = temporal_cert(*st.metric, *st.orientation, r);
            return FactResult{"orientation", rep.verdict == Verdict::passed, to_string(rep.verdict)};
          }};
}

KnownFact temporal_fact() {
  return {"temporal", "designated time function has timelike gradient (certificate passed)",
          [](const Spacetime& st, std::uint64_t seed, int jobs) {
            Region r = st.region();
            r.seed = seed;
            r.jobs = jobs;
            const ConditionReport rep = temporal_cert(*st.metric, *st.temporal, r);
            return FactResult{"temporal", rep.verdict == Verdict::passed, to_string(rep.verdict)};
          }};
}

KnownFact classify_fact(const std::string& sub, TrappedClass cls, std::optional<TrappedSubtype> subtype) {
  const std::string id = "classify_" + sub;
  std::string want = to_string(cls);
  if (subtype) want += "/" + std::string(to_string(*subtype));
  return {id, sub + " classifies as " + want,
          [=](const Spacetime& st, std::uint64_t, int jobs) {
            const TrappedVerdict v = classify(*st.metric, *st.orientation, st.submanifold(sub), {}, jobs);
            bool ok = v.cls == cls && (!subtype || v.subtype == *subtype);
            std::string detail = std::string(to_string(v.cls)) + "/" + to_string(v.subtype) + ", margin " + fmt(v.margin);
            return FactResult{id, ok, detail};
          }};
}

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

void check_params(const std::string& name, const std::map<std::string, double>& given,
                  const std::map<std::string, double>& defaults, std::map<std::string, double>& out) {
  out = defaults;
  for (const auto& [k, v] : given) {
    if (!defaults.count(k)) throw ParamError("unknown parameter '" + k + "' for " + name);
    if (!std::isfinite(v)) throw ParamError("parameter '" + k + "' must be finite");
    out[k] = v;
  }
}

int integer_param(const std::map<std::string, double>& p, const std::string& k, int lo, int hi) {
  const double v = p.at(k);
  if (v != std::floor(v) || v < lo || v > hi)
    throw ParamError("parameter '" + k + "' must be an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

void positive_param(const std::map<std::string, double>& p, const std::string& k) {
  if (!(p.at(k) > 0)) throw ParamError("parameter '" + k + "' must be positive");
}

NamedSubmanifold sub(std::string name, std::string description, Embedding e) {
  return {std::move(name), std::move(description), std::make_shared<const Embedding>(std::move(e))};
}

const std::optional<double> kNoPeriod = std::nullopt;

// Round 2-sphere of coordinate radius R around the spatial origin at time t0, in a chart
// with coordinates (t, x, y, z).
Embedding cartesian_sphere(const std::string& name, double t0, double R, const std::vector<std::string>& coords) {
  return make_embedding(name, {"theta", "phi"},
                        {"t0", "R*sin(theta)*cos(phi)", "R*sin(theta)*sin(phi)", "R*cos(theta)"},
                        {{"t0", t0}, {"R", R}}, {kNoPeriod, 2 * kPi}, make_box({0, 0}, {kPi, 2 * kPi}), {8, 16},
                        make_expr_vector(coords, {"0", coords[1], coords[2], coords[3]}));
}

Spacetime minkowski(const std::map<std::string, double>& given) {
  Spacetime st;
  st.name = "minkowski";
  check_params(st.name, given, {{"n", 4}, {"R", 1}}, st.params);
  const int n = integer_param(st.params, "n", 2, kMaxDim);
  positive_param(st.params, "R");
  const double R = st.params.at("R");
  std::vector<std::string> coords{"t"};
  for (int i = 1; i < n; ++i) coords.push_back("x" + std::to_string(i));
  std::vector<std::string> diag(static_cast<std::size_t>(n), "1");
  diag[0] = "-1";
  st.metric = make_expr_metric(coords, diagonal_metric(diag));
  st.orientation = std::make_shared<ConstantVectorField>(unit_vec(n, 0));
  st.temporal = make_expr_scalar(coords, "t");
  st.chart = "global Cartesian chart (t, x1, ..., x" + std::to_string(n - 1) + ")";
  st.regions["default"] = region_from(make_box(std::vector<double>(n, -1.0), std::vector<double>(n, 1.0)));

  std::vector<std::string> params, comps{"0"};
  for (int i = 1; i < n; ++i) {
    params.push_back("u" + std::to_string(i));
    comps.push_back("u" + std::to_string(i));
  }
  st.submanifolds.push_back(sub("plane", "{t = 0}, unit parameter box",
                                make_embedding("plane", params, comps, {}, std::vector<std::optional<double>>(n - 1),
                                               make_box(std::vector<double>(n - 1, -1.0), std::vector<double>(n - 1, 1.0)),
                                               std::vector<int>(n - 1, 4))));
  if (n == 4) {
    st.submanifolds.push_back(sub("sphere", "round sphere of radius R in {t = 0}", cartesian_sphere("sphere", 0.0, R, coords)));
  } else if (n == 3) {
    st.submanifolds.push_back(sub("circle", "round circle of radius R in {t = 0}",
                                  make_embedding("circle", {"phi"}, {"0", "R*cos(phi)", "R*sin(phi)"}, {{"R", R}},
                                                 {2 * kPi}, std::nullopt, {16},
                                                 make_expr_vector(coords, {"0", "x1", "x2"}))));
  }

  st.facts.push_back(riemann_zero_fact());
  st.facts.push_back(condition_fact(Cond::E, {Verdict::holds_weakly}));
  st.facts.push_back(condition_fact(Cond::FP, {Verdict::holds_weakly}));
  st.facts.push_back(condition_fact(Cond::O, {Verdict::holds_weakly}));
  st.facts.push_back(orientation_fact());
  st.facts.push_back(temporal_fact());
  st.facts.push_back({"x1_not_temporal", "x1 has spacelike gradient: temporal certificate inconclusive",
                      [coords](const Spacetime& s, std::uint64_t seed, int jobs) {
                        Region r = s.region();
                        r.seed = seed;
                        r.jobs = jobs;
                        const auto rep = temporal_cert(*s.metric, *make_expr_scalar(coords, "x1"), r);
                        return FactResult{"x1_not_temporal", rep.verdict == Verdict::inconclusive && rep.witness.has_value(),
                                          to_string(rep.verdict)};
                      }});
  st.facts.push_back(classify_fact("plane", TrappedClass::weakly_future_trapped, TrappedSubtype::extremal));
  if (n == 4) st.facts.push_back(classify_fact("sphere", TrappedClass::not_weakly_trapped, std::nullopt));
  return st;
}

Spacetime torus_quotient(const std::map<std::string, double>& given) {
  Spacetime st;
  st.name = "torus_quotient";
  check_params(st.name, given, {{"m", 3}}, st.params);
  const int m = integer_param(st.params, "m", 1, kMaxDim - 1);
  const int n = m + 1;
  std::vector<std::string> coords{"t"};
  std::vector<std::optional<double>> periods{kNoPeriod};
  for (int i = 1; i <= m; ++i) {
    coords.push_back("x" + std::to_string(i));
    periods.push_back(1.0);
  }
  std::vector<std::string> diag(static_cast<std::size_t>(n), "1");
  diag[0] = "-1";
  st.metric = make_expr_metric(coords, diagonal_metric(diag), {}, periods);
  st.orientation = std::make_shared<ConstantVectorField>(unit_vec(n, 0));
  st.temporal = make_expr_scalar(coords, "t");
  st.chart = "R x T^" + std::to_string(m) + ", spatial coordinates periodic with period 1";
  std::vector<double> lo(n, 0.0), hi(n, 1.0);
  lo[0] = -1.0;
  st.regions["default"] = region_from(make_box(lo, hi));

  std::vector<std::string> pp, pc{"0"};
  for (int i = 1; i <= m; ++i) {
    pp.push_back("u" + std::to_string(i));
    pc.push_back("u" + std::to_string(i));
  }
  st.submanifolds.push_back(sub("Pi", "Cauchy slice {t = 0}, a compact m-torus",
                                make_embedding("Pi", pp, pc, {}, std::vector<std::optional<double>>(m, 1.0), std::nullopt,
                                               std::vector<int>(m, 4))));
  if (m >= 2) {
    std::vector<std::string> sp, sc{"0", "0"};
    for (int i = 2; i <= m; ++i) {
      sp.push_back("u" + std::to_string(i));
      sc.push_back("u" + std::to_string(i));
    }
    st.submanifolds.push_back(sub("S", "{t = x1 = 0}, a compact (m-1)-torus",
                                  make_embedding("S", sp, sc, {}, std::vector<std::optional<double>>(m - 1, 1.0),
                                                 std::nullopt, std::vector<int>(m - 1, 4),
                                                 std::make_shared<ConstantVectorField>(unit_vec(m + 1, 1)))));
  }

  st.facts.push_back(riemann_zero_fact());
  st.facts.push_back({"periodic_identification", "metric at x and x + e_1 agree",
                      [](const Spacetime& s, std::uint64_t seed, int) {
                        double worst = 0.0;
                        for (const Point& p : fact_points(s, seed, 20)) {
                          Point q = p;
                          q(1) += 1.0;
                          worst = std::max(worst, (s.metric->value(p).g() - s.metric->value(q).g()).cwiseAbs().maxCoeff());
                        }
                        return FactResult{"periodic_identification", worst == 0.0, "max difference " + fmt(worst)};
                      }});
  st.facts.push_back(condition_fact(Cond::E, {Verdict::holds_weakly}));
  st.facts.push_back(temporal_fact());
  st.facts.push_back(classify_fact("Pi", TrappedClass::weakly_future_trapped, TrappedSubtype::extremal));
  if (m >= 2) st.facts.push_back(classify_fact("S", TrappedClass::weakly_future_trapped, TrappedSubtype::extremal));
  return st;
}

Embedding angular_sphere(const std::string& name, const std::vector<std::string>& comps, double r0, double t0) {
  return make_embedding(name, {"theta", "phi"}, comps, {{"r0", r0}, {"t0", t0}}, {kNoPeriod, 2 * kPi},
                        make_box({0, 0}, {kPi, 2 * kPi}), {8, 8},
                        std::make_shared<ConstantVectorField>(vec({0, 1, 0, 0})));
}

KnownFact expansion_fact(const std::string& subname, std::string id, std::string statement,
                         std::function<bool(double, double)> accept) {
  return {id, statement, [=](const Spacetime& st, std::uint64_t, int) {
            const Embedding& e = st.submanifold(subname);
            double pabs = 0.0, pmax = -1e300, mmax = -1e300;
            for (const Vec& u : e.grid_points()) {
              const NullData nd = null_data(*st.metric, *st.orientation, e, u, e.hint().get());
              pabs = std::max(pabs, std::abs(nd.theta_plus));
              pmax = std::max(pmax, nd.theta_plus);
              mmax = std::max(mmax, nd.theta_minus);
            }
            const bool ok = accept(pabs, std::max(mmax, pmax));
            return FactResult{id, ok, "max |theta+| " + fmt(pabs) + ", max theta+ " + fmt(pmax) + ", max theta- " + fmt(mmax)};
          }};
}

Spacetime schwarzschild_ef(const std::map<std::string, double>& given) {
  Spacetime st;
  st.name = "schwarzschild_ef";
  check_params(st.name, given, {{"M", 1}}, st.params);
  positive_param(st.params, "M");
  const double M = st.params.at("M");
  const std::vector<std::string> coords{"v", "r", "theta", "phi"};
  const double inf = std::numeric_limits<double>::infinity();
  st.metric = make_expr_metric(coords, {"-(1-2*M/r)", "1", "0", "0", "0", "r^2", "0", "0", "0", "r^2*sin(theta)^2"},
                               {{"M", M}}, {kNoPeriod, kNoPeriod, kNoPeriod, 2 * kPi},
                               make_box({-inf, 0, 0, 0}, {inf, inf, kPi, 2 * kPi}));
  st.orientation = make_expr_vector(coords, {"1", "-M/r", "0", "0"}, {{"M", M}});
  st.temporal = make_expr_scalar(coords, "v - r");
  st.chart = "ingoing Eddington-Finkelstein (v, r, theta, phi), r > 0, regular across r = 2M";
  st.regions["default"] = region_from(make_box({-1, 2.5 * M, 0.5, 0}, {1, 6 * M, kPi - 0.5, 2 * kPi}));
  st.regions["interior"] = region_from(make_box({-1, 0.5 * M, 0.5, 0}, {1, 1.9 * M, kPi - 0.5, 2 * kPi}));
  st.regions["horizon"] = region_from(make_box({-1, 1.5 * M, 0.5, 0}, {1, 2.5 * M, kPi - 0.5, 2 * kPi}));

  const std::vector<std::string> comps{"0", "r0", "theta", "phi"};
  st.submanifolds.push_back(sub("outer", "sphere v = 0, r = 3M", angular_sphere("outer", comps, 3 * M, 0)));
  st.submanifolds.push_back(sub("horizon", "sphere v = 0, r = 2M", angular_sphere("horizon", comps, 2 * M, 0)));
  st.submanifolds.push_back(sub("inner", "sphere v = 0, r = 1.5M", angular_sphere("inner", comps, 1.5 * M, 0)));

  st.facts.push_back(ricci_zero_fact());
  st.facts.push_back(orientation_fact());
  st.facts.push_back(temporal_fact());
  st.facts.push_back(condition_fact(Cond::E, {Verdict::holds_weakly}));
  st.facts.push_back(condition_fact(Cond::O, {Verdict::violated}));
  st.facts.push_back(classify_fact("outer", TrappedClass::not_weakly_trapped, std::nullopt));
  st.facts.push_back(classify_fact("horizon", TrappedClass::weakly_future_trapped, TrappedSubtype::mots));
  st.facts.push_back(classify_fact("inner", TrappedClass::future_trapped, std::nullopt));
  st.facts.push_back(expansion_fact("horizon", "horizon_mots", "theta+ vanishes on r = 2M",
                                    [](double pmax, double) { return pmax < 1e-7; }));
  st.facts.push_back(expansion_fact("inner", "inner_expansions", "theta+ and theta- negative on r = 1.5M",
                                    [](double, double worst) { return worst < 0; }));
  return st;
}

Spacetime schwarzschild_static(const std::map<std::string, double>& given) {
  Spacetime st;
  st.name = "schwarzschild_static";
  check_params(st.name, given, {{"M", 1}}, st.params);
  positive_param(st.params, "M");
  const double M = st.params.at("M");
  const std::vector<std::string> coords{"t", "r", "theta", "phi"};
  const double inf = std::numeric_limits<double>::infinity();
  st.metric = make_expr_metric(coords, diagonal_metric({"-(1-2*M/r)", "1/(1-2*M/r)", "r^2", "r^2*sin(theta)^2"}),
                               {{"M", M}}, {kNoPeriod, kNoPeriod, kNoPeriod, 2 * kPi},
                               make_box({-inf, 2 * M, 0, 0}, {inf, inf, kPi, 2 * kPi}));
  st.orientation = std::make_shared<ConstantVectorField>(vec({1, 0, 0, 0}));
  st.temporal = make_expr_scalar(coords, "t");
  st.chart = "static exterior chart (t, r, theta, phi), r > 2M";
  st.regions["default"] = region_from(make_box({-1, 3 * M, 0.5, 0}, {1, 8 * M, kPi - 0.5, 2 * kPi}));
  st.submanifolds.push_back(
      sub("sphere", "sphere t = 0, r = 4M", angular_sphere("sphere", {"0", "r0", "theta", "phi"}, 4 * M, 0)));

  st.facts.push_back(ricci_zero_fact());
  st.facts.push_back({"tidal_r4", "unit static observer at r = 4M: tidal eigenvalues {-2M/r^3, M/r^3, M/r^3}",
                      [M](const Spacetime& s, std::uint64_t, int) {
                        const double r = 4 * M;
                        const Point p = vec({0, r, kPi / 2, 0});
                        const TidalOperator t = tidal(*s.metric, {p, vec({1, 0, 0, 0})});
                        const Vec want = vec({-2 * M / (r * r * r), M / (r * r * r), M / (r * r * r)});
                        const double err = (t.eigenvalues - want).cwiseAbs().maxCoeff();
                        return FactResult{"tidal_r4", err < 1e-9, "max deviation " + fmt(err)};
                      }});
  st.facts.push_back({"kretschmann", "Kretschmann scalar 48 M^2 / r^6",
                      [M](const Spacetime& s, std::uint64_t, int) {
                        const double r = 5 * M;
                        const double k = local_geometry(*s.metric, vec({0, r, 1.0, 0.5})).kretschmann();
                        const double want = 48 * M * M / std::pow(r, 6);
                        const double rel = std::abs(k - want) / want;
                        return FactResult{"kretschmann", rel < 1e-9, "relative error " + fmt(rel)};
                      }});
  st.facts.push_back(orientation_fact());
  st.facts.push_back(temporal_fact());
  st.facts.push_back(condition_fact(Cond::FP, {Verdict::violated}));
  st.facts.push_back(classify_fact("sphere", TrappedClass::not_weakly_trapped, std::nullopt));
  return st;
}

Spacetime flrw_dust(const std::map<std::string, double>& given) {
  Spacetime st;
  st.name = "flrw_dust";
  check_params(st.name, given, {{"rho0", 1.0 / (6 * kPi)}}, st.params);
  positive_param(st.params, "rho0");
  const double rho0 = st.params.at("rho0");
  const double t0 = 1.0 / std::sqrt(6 * kPi * rho0);
  const std::vector<std::string> coords{"t", "x", "y", "z"};
  const double inf = std::numeric_limits<double>::infinity();
  const std::string a2 = "(t/t0)^(4/3)";
  st.metric = make_expr_metric(coords, diagonal_metric({"-1", a2, a2, a2}), {{"t0", t0}}, {},
                               make_box({0, -inf, -inf, -inf}, {inf, inf, inf, inf}));
  st.orientation = std::make_shared<ConstantVectorField>(vec({1, 0, 0, 0}));
  st.temporal = make_expr_scalar(coords, "t");
  st.chart = "comoving chart (t, x, y, z), t > 0, a(t) = (t/t0)^(2/3), t0 = 1/sqrt(6 pi rho0)";
  st.regions["default"] = region_from(make_box({0.5 * t0, -1, -1, -1}, {2 * t0, 1, 1, 1}));
  st.submanifolds.push_back(sub("sphere", "comoving sphere of coordinate radius 0.5 at t = t0",
                                cartesian_sphere("sphere", t0, 0.5, coords)));

  st.facts.push_back({"dust_density", "Ric(d_t, d_t) = 4 pi rho0 at t = t0",
                      [rho0, t0](const Spacetime& s, std::uint64_t, int) {
                        const double v = local_geometry(*s.metric, vec({t0, 0.1, 0.2, 0.3})).ricci()(0, 0);
                        const double want = 4 * kPi * rho0;
                        const double rel = std::abs(v - want) / want;
                        return FactResult{"dust_density", rel < 1e-9, "relative error " + fmt(rel)};
                      }});
  st.facts.push_back(condition_fact(Cond::SE, {Verdict::holds_strictly}));
  st.facts.push_back(condition_fact(Cond::P, {Verdict::holds_strictly}));
  st.facts.push_back(condition_fact(Cond::O, {Verdict::holds_strictly, Verdict::holds_weakly}));
  st.facts.push_back(orientation_fact());
  st.facts.push_back(temporal_fact());
  st.facts.push_back(classify_fact("sphere", TrappedClass::not_weakly_trapped, std::nullopt));
  return st;
}

Spacetime desitter(const std::map<std::string, double>& given) {
  Spacetime st;
  st.name = "desitter";
  check_params(st.name, given, {{"H", 1}}, st.params);
  positive_param(st.params, "H");
  const double H = st.params.at("H");
  const std::vector<std::string> coords{"t", "x", "y", "z"};
  const std::string a2 = "exp(2*H*t)";
  st.metric = make_expr_metric(coords, diagonal_metric({"-1", a2, a2, a2}), {{"H", H}});
  st.orientation = std::make_shared<ConstantVectorField>(vec({1, 0, 0, 0}));
  st.temporal = make_expr_scalar(coords, "t");
  st.chart = "flat slicing (t, x, y, z), a(t) = exp(H t)";
  st.regions["default"] = region_from(make_box({-0.5, -1, -1, -1}, {0.5, 1, 1, 1}));
  st.submanifolds.push_back(sub("sphere", "sphere of coordinate radius 0.5 at t = 0",
                                cartesian_sphere("sphere", 0.0, 0.5, coords)));

  st.facts.push_back({"constant_curvature", "Riem(w,v,v,w) = H^2 (g(w,w) g(v,v) - g(v,w)^2)",
                      [H](const Spacetime& s, std::uint64_t seed, int) {
                        Rng rng(seed);
                        double worst = 0.0;
                        for (const Point& p : fact_points(s, seed, 10)) {
                          const LocalGeometry geo = local_geometry(*s.metric, p);
                          const Mat& G = geo.metric().g();
                          Vec v(4), w(4);
                          for (int i = 0; i < 4; ++i) {
                            v(i) = rng.normal();
                            w(i) = rng.normal();
                          }
                          const double want = H * H * (w.dot(G * w) * v.dot(G * v) - std::pow(v.dot(G * w), 2));
                          worst = std::max(worst, std::abs(geo.riem(w, v, v, w) - want));
                        }
                        return FactResult{"constant_curvature", worst < 1e-9, "max deviation " + fmt(worst)};
                      }});
  st.facts.push_back(condition_fact(Cond::E, {Verdict::violated}));
  st.facts.push_back(condition_fact(Cond::FP, {Verdict::violated}));
  st.facts.push_back(condition_fact(Cond::O, {Verdict::violated}));
  st.facts.push_back(orientation_fact());
  st.facts.push_back(temporal_fact());
  st.facts.push_back(classify_fact("sphere", TrappedClass::not_weakly_trapped, std::nullopt));
  return st;
}

Spacetime null_H_demo(const std::map<std::string, double>& given) {
  Spacetime st;
  st.name = "null_H_demo";
  check_params(st.name, given, {}, st.params);
  const std::vector<std::string> coords{"t", "x", "y", "z"};
  st.metric = make_expr_metric(coords, diagonal_metric({"-1", "1", "1", "1"}));
  st.orientation = std::make_shared<ConstantVectorField>(vec({1, 0, 0, 0}));
  st.temporal = make_expr_scalar(coords, "t");
  st.chart = "Minkowski (t, x, y, z)";
  st.regions["default"] = region_from(make_box({-1, -1, -1, -1}, {1, 1, 1, 1}));
  st.submanifolds.push_back(sub("surface", "(s, z) -> (-s^2/2, s, -s^2/2, z); H = (-1, 0, -1, 0) past null",
                                make_embedding("surface", {"s", "z"}, {"-s^2/2", "s", "-s^2/2", "z"}, {},
                                               {kNoPeriod, kNoPeriod}, make_box({-1, -1}, {1, 1}), {9, 9})));
  st.marked_parameter = vec({0, 0});

  st.facts.push_back(riemann_zero_fact());
  st.facts.push_back({"past_null_H", "H at the marked point is past-directed null",
                      [](const Spacetime& s, std::uint64_t, int) {
                        const MeanCurvature mc = mean_curv(*s.metric, *s.orientation, s.submanifold("surface"),
                                                           *s.marked_parameter);
                        const bool ok = mc.causal.causal == Causal::null && mc.causal.orientation == Orientation::past;
                        return FactResult{"past_null_H", ok,
                                          std::string(to_string(mc.causal.causal)) + "/" + to_string(mc.causal.orientation)};
                      }});
  st.facts.push_back(classify_fact("surface", TrappedClass::weakly_future_trapped, TrappedSubtype::null_h));
  return st;
}

}  // namespace

const Embedding& Spacetime::submanifold(const std::string& n) const { return *submanifold_ptr(n); }

EmbeddingPtr Spacetime::submanifold_ptr(const std::string& n) const {
  for (const auto& s : submanifolds)
    if (s.name == n) return s.embedding;
  std::string known;
  for (const auto& s : submanifolds) known += (known.empty() ? "" : ", ") + s.name;
  throw DomainError("no submanifold '" + n + "' in " + name + " (available: " + known + ")");
}

Region Spacetime::region(const std::string& n) const {
  auto it = regions.find(n);
  if (it == regions.end()) throw DomainError("no region '" + n + "' in " + name);
  return it->second;
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries{
      {"minkowski", {{"n", 4}, {"R", 1}}, "flat space R^n; plane {t=0}; sphere (n=4) or circle (n=3) of radius R"},
      {"torus_quotient", {{"m", 3}}, "flat R x T^m, period 1; Cauchy torus Pi and codimension-2 torus S"},
      {"schwarzschild_ef", {{"M", 1}}, "Schwarzschild, ingoing Eddington-Finkelstein; spheres r = 3M, 2M, 1.5M"},
      {"schwarzschild_static", {{"M", 1}}, "Schwarzschild exterior, static chart; sphere r = 4M"},
      {"flrw_dust", {{"rho0", 1.0 / (6 * kPi)}}, "spatially flat dust FLRW; comoving sphere at t0"},
      {"desitter", {{"H", 1}}, "de Sitter, flat slicing; sphere at t = 0"},
      {"null_H_demo", {}, "Minkowski surface with past-null mean curvature at the marked point"},
  };
  return entries;
}

Spacetime load(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "minkowski") return minkowski(params);
  if (name == "torus_quotient") return torus_quotient(params);
  if (name == "schwarzschild_ef") return schwarzschild_ef(params);
  if (name == "schwarzschild_static") return schwarzschild_static(params);
  if (name == "flrw_dust") return flrw_dust(params);
  if (name == "desitter") return desitter(params);
  if (name == "null_H_demo") return null_H_demo(params);
  throw UnknownSpacetime("unknown spacetime '" + name + "'");
}

std::vector<FactResult> verify_facts(const Spacetime& st, std::uint64_t seed, int jobs) {
  std::vector<FactResult> out;
  for (const KnownFact& f : st.facts) {
    try {
      out.push_back(f.check(st, seed, jobs));
    } catch (const Error& e) {
      out.push_back({f.id, false, std::string("error: ") + e.what()});
    }
  }
  return out;
}

}  // namespace lorentz
