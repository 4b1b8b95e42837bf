#include "lorentz/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "lorentz/errors.hpp"
#include "lorentz/parallel.hpp"
#include "lorentz/random.hpp"

namespace lorentz {

namespace {

// Directions with |s| beyond this are snapped onto the null cone for the tidal objective
// and excluded entirely in timelike-only mode.
constexpr double kNullBand = 1e-6;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

enum class Objective { ricci, riem, tidal };

struct PointContext {
  Point p;
  LocalGeometry geo;
  Mat frame;  // column 0 timelike
  std::vector<Vec> dirs;
};

PointContext make_context(const MetricField& g, const Point& p, const Region& R, std::size_t index) {
  LocalGeometry geo(g.jet(p), true);
  Mat E = orthonormal_frame(geo.metric());
  const int k = geo.dim() - 1;
  Rng rng(mix_seed(R.seed, index));
  std::vector<Vec> dirs;
  dirs.reserve(static_cast<std::size_t>(R.density));
  for (int d = 0; d < R.density; ++d) {
    Vec s(k);
    for (int i = 0; i < k; ++i) s(i) = rng.normal();
    const double nrm = s.norm();
    if (nrm == 0.0) s = unit_vec(k, 0); else s /= nrm;
    if (d % 2 == 1) s *= std::pow(rng.uniform(), 1.0 / k);
    dirs.push_back(s);
  }
  return {p, std::move(geo), std::move(E), std::move(dirs)};
}

Vec shell_vector(const Mat& E, const Vec& s) {
  Vec v = E.col(0);
  for (int i = 0; i < s.size(); ++i) v += s(i) * E.col(i + 1);
  return v / v.norm();
}

// Basis (columns) of the Euclidean complement of v.
Mat h_complement(const Vec& v) {
  const int n = static_cast<int>(v.size());
  Mat vm = v;
  Eigen::HouseholderQR<Mat> qr(vm);
  Mat Q = qr.householderQ() * Mat::Identity(n, n);
  return Q.rightCols(n - 1);
}

struct Eval {
  double value = 0.0;
  Vec v;
  std::optional<Vec> w;
  bool timelike = false;
  double scale = 1.0;
};

double riem_min(const LocalGeometry& geo, const Vec& v, Vec* w) {
  const Mat Q = h_complement(v);
  Mat S = Q.transpose() * geo.tidal_form(v) * Q;
  S = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  if (w) *w = Q * es.eigenvectors().col(0);
  return es.eigenvalues()(0);
}

Eval evaluate(const PointContext& c, Objective obj, Vec s, bool timelike_only, const Tolerances& tol) {
  const double r = s.norm();
  const double rmax = 1.0 - kNullBand;
  bool null = false;
  if (timelike_only) {
    if (r > rmax) s *= rmax / r;
  } else if (obj == Objective::tidal && r > rmax) {
    s /= r;
    null = true;
  }
  Eval e;
  e.v = shell_vector(c.frame, s);
  e.timelike = !null && s.norm() <= rmax;
  switch (obj) {
    case Objective::ricci:
      e.value = c.geo.ricci(e.v);
      break;
    case Objective::riem: {
      Vec w;
      e.value = riem_min(c.geo, e.v, &w);
      e.w = w;
      break;
    }
    case Objective::tidal: {
      const TidalOperator t = tidal(c.geo, e.v, false, tol.tau_c);
      e.value = t.eigenvalues.size() ? t.eigenvalues(0) : 0.0;
      double sc = 0.0;
      for (const Vec& a : t.screen) sc += a.squaredNorm();
      e.scale = std::max(1.0, sc);
      break;
    }
  }
  return e;
}

Vec project_ball(Vec s, double rmax) {
  const double r = s.norm();
  if (r > rmax) s *= rmax / r;
  return s;
}

// Projected descent of the objective in the shell parameter s, unit ball.
Eval descend(const PointContext& c, Objective obj, Vec s, bool timelike_only, int iterations, const Tolerances& tol) {
  const double rmax = timelike_only ? 1.0 - kNullBand : 1.0;
  auto F = [&](const Vec& x) { return evaluate(c, obj, x, timelike_only, tol).value; };
  s = project_ball(s, rmax);
  double f = F(s);
  double step = 0.25;
  const double h = 1e-6;
  for (int it = 0; it < iterations; ++it) {
    Vec grad(s.size());
    for (int i = 0; i < s.size(); ++i) {
      Vec a = s, b = s;
      a(i) += h;
      b(i) -= h;
      grad(i) = (F(project_ball(a, rmax)) - F(project_ball(b, rmax))) / (2 * h);
    }
    const double gn = grad.norm();
    if (!(gn > 1e-14)) break;
    bool improved = false;
    for (int tries = 0; tries < 12; ++tries) {
      const Vec s2 = project_ball(s - (step / gn) * grad, rmax);
      const double f2 = F(s2);
      if (f2 < f) {
        s = s2;
        f = f2;
        step = std::min(1.0, step * 1.5);
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return evaluate(c, obj, s, timelike_only, tol);
}

struct PointResult {
  Eval best;
  std::size_t samples = 0;
};

PointResult scan_point(const PointContext& c, Objective obj, bool timelike_only, const Region& R,
                       const Tolerances& tol) {
  std::vector<std::pair<double, std::size_t>> vals;
  vals.reserve(c.dirs.size());
  PointResult out;
  out.best.value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < c.dirs.size(); ++k) {
    Eval e = evaluate(c, obj, c.dirs[k], timelike_only, tol);
    vals.emplace_back(e.value, k);
    if (e.value < out.best.value) out.best = e;
  }
  out.samples = c.dirs.size();
  std::stable_sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  const std::size_t starts = std::min<std::size_t>(static_cast<std::size_t>(std::max(0, R.restarts)), vals.size());
  for (std::size_t r = 0; r < starts; ++r) {
    Eval e = descend(c, obj, c.dirs[vals[r].second], timelike_only, R.iterations, tol);
    if (e.value < out.best.value) out.best = e;
  }
  return out;
}

ConditionReport run_condition(const MetricField& g, const Region& R, Objective obj, bool timelike_only,
                              const Tolerances& tol) {
  const std::vector<Point> pts = R.sample_points(g);
  std::vector<PointResult> res(pts.size());
  parallel_for(pts.size(), R.jobs, [&](std::size_t i) {
    const PointContext c = make_context(g, pts[i], R, i);
    res[i] = scan_point(c, obj, timelike_only, R, tol);
  });
  ConditionReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    rep.samples += res[i].samples;
    if (res[i].best.value < rep.min_margin) {
      rep.min_margin = res[i].best.value;
      arg = i;
    }
  }
  if (!res.empty()) {
    ConditionWitness w;
    w.p = pts[arg];
    w.v = res[arg].best.v;
    w.w = res[arg].best.w;
    w.value = res[arg].best.value;
    rep.witness = w;
  }
  rep.verdict = margin_verdict(rep.min_margin, tol.tau_cond);
  return rep;
}

}  // namespace

std::vector<Point> Region::sample_points(const MetricField& g) const {
  if (density < 8) throw DomainError("causal shell density must be at least 8");
  if (!points.empty()) {
    for (const Point& p : points) {
      if (p.size() != g.dim()) throw DimensionError("region point has wrong dimension");
      if (!g.in_domain(p)) throw DomainError("region point outside the chart domain");
    }
    return points;
  }
  if (!box) throw DomainError("region has neither a box nor points");
  const int n = g.dim();
  if (box->dim() != n) throw DimensionError("region box has wrong dimension");
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(box->lo[i]) || !std::isfinite(box->hi[i]) || !(box->hi[i] >= box->lo[i]))
      throw DomainError("region box must be finite and non-empty");
  }
  Rng rng(mix_seed(seed, 0xC0FFEEull));
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(point_count));
  int attempts = 0;
  while (static_cast<int>(out.size()) < point_count) {
    if (++attempts > 100 * std::max(1, point_count)) throw DomainError("region box does not meet the chart domain");
    Point p(n);
    for (int i = 0; i < n; ++i) p(i) = rng.uniform(box->lo[i], box->hi[i]);
    if (g.in_domain(p)) out.push_back(p);
  }
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds_strictly: return "holds-strictly";
    case Verdict::holds_weakly: return "holds-weakly";
    case Verdict::violated: return "violated";
    case Verdict::passed: return "passed";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

bool ConditionReport::holds() const {
  if (verdict == Verdict::passed || verdict == Verdict::holds_strictly) return true;
  return verdict == Verdict::holds_weakly && !strict;
}

Verdict margin_verdict(double min_value, double tau) {
  if (min_value > tau) return Verdict::holds_strictly;
  if (min_value >= -tau) return Verdict::holds_weakly;
  return Verdict::violated;
}

ConditionReport ricci_condition(const MetricField& g, const Region& R, bool strict, const Tolerances& tol) {
  ConditionReport rep = run_condition(g, R, Objective::ricci, false, tol);
  rep.condition = strict ? "SE" : "E";
  rep.strict = strict;
  return rep;
}

ConditionReport riem_condition(const MetricField& g, const Region& R, bool strict, bool timelike_only,
                               const Tolerances& tol) {
  ConditionReport rep = run_condition(g, R, Objective::riem, timelike_only, tol);
  rep.condition = strict ? "P" : "FP";
  if (timelike_only) {
    rep.condition += "-timelike";
    rep.note = "directions restricted to the open timelike shell";
  }
  rep.strict = strict;
  return rep;
}

ConditionReport tidal_condition(const MetricField& g, const Region& R, const Tolerances& tol) {
  ConditionReport rep = run_condition(g, R, Objective::tidal, false, tol);
  rep.condition = "O";
  rep.strict = false;
  return rep;
}

namespace {

ConditionReport certificate(const std::string& name, const std::vector<Point>& pts,
                            const std::function<std::pair<double, Vec>(const Point&)>& margin_at, double tau,
                            Verdict on_failure, int jobs) {
  std::vector<std::pair<double, Vec>> vals(pts.size());
  parallel_for(pts.size(), jobs, [&](std::size_t i) { vals[i] = margin_at(pts[i]); });
  ConditionReport rep;
  rep.condition = name;
  rep.samples = pts.size();
  rep.min_margin = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i].first < rep.min_margin) {
      rep.min_margin = vals[i].first;
      arg = i;
    }
  }
  if (!pts.empty()) rep.witness = ConditionWitness{pts[arg], vals[arg].second, std::nullopt, vals[arg].first};
  rep.verdict = rep.min_margin > tau ? Verdict::passed : on_failure;
  rep.strict = true;
  return rep;
}

}  // namespace

ConditionReport temporal_cert(const MetricField& g, const VectorField& X, const Region& R, const Tolerances& tol) {
  const auto pts = R.sample_points(g);
  auto rep = certificate(
      "orientation", pts,
      [&](const Point& p) {
        const Vec x = X.at(p);
        const MetricValue m = g.value(p);
        const double hn = x.squaredNorm();
        const double q = x.dot(m.g() * x);
        return std::make_pair(hn > 0 ? -q / hn : 0.0, x);
      },
      tol.tau_c, Verdict::violated, R.jobs);
  rep.note = "g(X, X) < 0 at every sample";
  return rep;
}

ConditionReport temporal_cert(const MetricField& g, const ScalarField& t, const Region& R, const Tolerances& tol) {
  const auto pts = R.sample_points(g);
  auto rep = certificate(
      "temporal", pts,
      [&](const Point& p) {
        const Jet2 j = t.jet(p);
        const MetricValue m = g.value(p);
        const Vec grad = m.inverse() * j.gradient;
        const double hn = grad.squaredNorm();
        const double q = grad.dot(m.g() * grad);
        return std::make_pair(hn > 0 ? -q / hn : 0.0, grad);
      },
      tol.tau_c, Verdict::inconclusive, R.jobs);
  rep.note = rep.verdict == Verdict::passed ? "gradient timelike at every sample"
                                            : "gradient not timelike at some sample; no conclusion";
  return rep;
}

std::vector<ShellSample> shell_samples(const MetricField& g, const Region& R, const Tolerances& tol) {
  const auto pts = R.sample_points(g);
  std::vector<std::vector<ShellSample>> per(pts.size());
  parallel_for(pts.size(), R.jobs, [&](std::size_t i) {
    const PointContext c = make_context(g, pts[i], R, i);
    for (const Vec& s : c.dirs) {
      ShellSample out;
      out.point_index = i;
      const Eval t = evaluate(c, Objective::tidal, s, false, tol);
      // Ricci and Riemann use the same vector the tidal objective saw.
      out.v = t.v;
      out.timelike = t.timelike;
      out.tidal = t.value;
      out.scale = t.scale;
      out.ricci = c.geo.ricci(t.v);
      out.riem = riem_min(c.geo, t.v, nullptr);
      per[i].push_back(std::move(out));
    }
  });
  std::vector<ShellSample> all;
  for (auto& v : per) all.insert(all.end(), v.begin(), v.end());
  return all;
}

AuditReport inclusion_audit(const MetricField& g, const Region& R, const Tolerances& tol) {
  const auto pts = R.sample_points(g);
  const auto samples = shell_samples(g, R, tol);
  const double tau = tol.tau_cond;
  const int n = g.dim();

  AuditReport rep;
  rep.samples = samples.size();
  rep.implications = {{"P=>SE"}, {"P=>O"}, {"O=>E"}, {"FP=>E"}, {"O=>FP (timelike v)"}, {"O=>FP (point)"}};

  auto record = [&](std::size_t k, const ShellSample& s, bool premise, bool conclusion) {
    Implication& imp = rep.implications[k];
    ++imp.checked;
    if (!premise) return;
    ++imp.premise_true;
    if (conclusion) return;
    ++imp.violations;
    ++rep.violation_count;
    if (rep.violations.size() < 10)
      rep.violations.push_back({imp.name, pts[s.point_index], s.v, s.ricci, s.riem, s.tidal});
  };

  std::vector<double> tidal_min(pts.size(), std::numeric_limits<double>::infinity());
  std::vector<double> riem_min_pt(pts.size(), std::numeric_limits<double>::infinity());
  std::vector<double> kappa(pts.size(), 10.0);
  std::vector<const ShellSample*> worst(pts.size(), nullptr);

  for (const ShellSample& s : samples) {
    const double kap = 10.0 * s.scale;
    record(0, s, s.riem > tau, s.ricci > 0.0);
    record(1, s, s.riem > tau, s.tidal >= -tau);
    record(2, s, s.tidal >= -tau, s.ricci >= -2.0 * n * tau);
    record(3, s, s.riem >= -tau, s.ricci >= -tau * kap);
    if (s.timelike) {
      // Riem(w,v,v,w) >= tidal_min * g(w_g, w_g) where w_g is w projected into v^⊥.
      const MetricValue m = g.value(pts[s.point_index]);
      const Mat G = m.g();
      const double q = s.v.dot(G * s.v);
      const Mat P = Mat::Identity(n, n) - s.v * (s.v.transpose() * G) / q;
      const Mat Q = h_complement(s.v);
      Mat K = Q.transpose() * P.transpose() * G * P * Q;
      K = 0.5 * (K + K.transpose());
      const double kmax = Eigen::SelfAdjointEigenSolver<Mat>(K).eigenvalues().maxCoeff();
      const double bound = 10.0 * std::max(1.0, kmax);
      record(4, s, s.tidal >= -tau, s.riem >= -tau * bound);
      kappa[s.point_index] = std::max(kappa[s.point_index], bound);
    }
    const std::size_t i = s.point_index;
    tidal_min[i] = std::min(tidal_min[i], s.tidal);
    if (s.riem < riem_min_pt[i]) {
      riem_min_pt[i] = s.riem;
      worst[i] = &s;
    }
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!worst[i]) continue;
    record(5, *worst[i], tidal_min[i] >= -tau, riem_min_pt[i] >= -tau * kappa[i]);
  }
  return rep;
}

Vec normal_direction(const MetricField& g, const VectorField& X, const Embedding& s, const Vec& u0,
                     const std::string& choice, const Tolerances& tol) {
  if (choice == "plus" || choice == "minus") {
    if (!s.hint()) throw NotApplicable("null normal choice needs an outward hint on the submanifold");
    const NullData nd = null_data(g, X, s, u0, s.hint().get(), tol);
    return choice == "plus" ? nd.K_plus : nd.K_minus;
  }
  if (choice == "timelike") {
    const Point x = s.point(u0);
    const MetricValue m = g.value(x);
    Vec T = normal_part(m, s.jacobian(u0), X.at(x));
    const double q = T.dot(m.g() * T);
    if (!(q < 0)) throw NotApplicable("no timelike normal at the base point");
    return T / std::sqrt(-q);
  }
  throw NotApplicable("unknown normal choice '" + choice + "' (expected plus, minus or timelike)");
}

GsResult gs_trace(const MetricField& g, const VectorField& X, const Embedding& s, const Vec& u0, const Vec& direction,
                  double length, const Tolerances& tol) {
  const Point x0 = s.point(u0);
  const Mat J = s.jacobian(u0);
  const MetricValue m = g.value(x0);
  const Mat G = m.g();
  const CausalClass cc = causal_class(m, direction, X.at(x0), tol.tau_c, tol.tau_zero);
  if ((cc.causal != Causal::timelike && cc.causal != Causal::null) || cc.orientation != Orientation::future)
    throw NotApplicable("initial direction must be future causal");
  for (int a = 0; a < J.cols(); ++a) {
    const double ip = direction.dot(G * J.col(a));
    if (std::abs(ip) > 1e-8 * direction.norm() * J.col(a).norm())
      throw NotApplicable("initial direction is not normal to the submanifold");
  }

  GeodesicOptions opt;
  opt.eps_geo = tol.eps_geo;
  const GeodesicSolution sol = geodesic(g, x0, direction, length, opt);
  std::vector<Vec> basis;
  for (int a = 0; a < J.cols(); ++a) basis.push_back(J.col(a));
  const auto E = parallel_transport(g, sol, basis);
  const Mat ginv = (J.transpose() * G * J).inverse();

  GsResult out;
  out.chart_exit = sol.chart_exit;
  out.min_trace = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const LocalGeometry geo = local_geometry(g, sol.points[i]);
    const Vec& v = sol.velocities[i];
    double tr = 0.0;
    for (int a = 0; a < J.cols(); ++a)
      for (int b = 0; b < J.cols(); ++b) tr += ginv(a, b) * geo.riem(v, E[i][a], E[i][b], v);
    out.s.push_back(sol.s[i]);
    out.trace.push_back(tr);
    if (tr < out.min_trace) {
      out.min_trace = tr;
      out.s_at_min = sol.s[i];
    }
    if (!out.first_negative && tr < -tol.tau_cond) out.first_negative = sol.s[i];
  }
  return out;
}

}  // namespace lorentz
