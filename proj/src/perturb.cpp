#include "lorentz/perturb.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "lorentz/errors.hpp"
#include "lorentz/geometry.hpp"
#include "lorentz/normal_chart.hpp"
#include "lorentz/random.hpp"

namespace lorentz {

CutoffValue cutoff(double u) {
  if (u <= 0.25) return {1.0, 0.0, 0.0};
  if (u >= 1.0) return {0.0, 0.0, 0.0};
  const double k = 1.0 / 0.75;
  const double s = (u - 0.25) * k;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double S = 10 * s3 - 15 * s4 + 6 * s5;
  const double dS = 30 * s2 - 60 * s3 + 30 * s4;
  const double ddS = 60 * s - 180 * s2 + 120 * s3;
  return {1.0 - S, -dS * k, -ddS * k * k};
}

BumpField::BumpField(Point center, double radius, Core core, std::vector<std::optional<double>> periods)
    : center_(std::move(center)), radius_(radius), core_(std::move(core)), periods_(std::move(periods)) {
  if (!(radius_ > 0)) throw RadiusError("bump radius must be positive");
  periods_.resize(center_.size());
}

Vec BumpField::displacement(const Point& x) const {
  Vec d = x - center_;
  for (int i = 0; i < dim(); ++i)
    if (periods_[i]) d(i) -= *periods_[i] * std::round(d(i) / *periods_[i]);
  return d;
}

Box BumpField::support_box() const {
  Box b = Box::unbounded(dim());
  for (int i = 0; i < dim(); ++i) {
    b.lo[i] = center_(i) - radius_;
    b.hi[i] = center_(i) + radius_;
  }
  return b;
}

Jet2 BumpField::jet(const Point& x) const {
  const int n = dim();
  Vec d = displacement(x);
  const double r2 = radius_ * radius_;
  const double u = d.squaredNorm() / r2;
  if (u >= 1.0) return Jet2::constant(n, 0.0);
  Jet2 core = core_(x, d);
  if (u <= 0.25) return core;
  CutoffValue c = cutoff(u);
  // χ(u(x)) with u = |d|²/ρ²: ∇u = 2d/ρ², ∇²u = 2I/ρ²
  Vec du = 2.0 * d / r2;
  Mat chi_h = c.d2 * du * du.transpose() + c.d1 * (2.0 / r2) * Mat::Identity(n, n);
  Jet2 chi(c.value, c.d1 * du, chi_h);
  return core * chi;
}

double default_bump_radius(const MetricField& g, const Point& p) {
  if (!g.in_domain(p)) throw RadiusError("bump center lies outside the chart domain");
  double rho = 0.5;
  const Box& dom = g.domain();
  for (int i = 0; i < g.dim(); ++i) {
    const auto& per = g.periods();
    if (i < static_cast<int>(per.size()) && per[i]) {
      rho = std::min(rho, 0.25 * *per[i]);
      continue;
    }
    double dist = std::min(p(i) - dom.lo[i], dom.hi[i] - p(i));
    if (std::isfinite(dist)) rho = std::min(rho, 0.25 * dist);
  }
  if (!(rho > 0)) throw RadiusError("bump center too close to the chart boundary");
  return rho;
}

std::shared_ptr<BumpField> bump(const MetricField& chart, const Point& p, double value, const Vec& gradient,
                                std::optional<double> rho) {
  if (p.size() != chart.dim() || gradient.size() != chart.dim()) throw DimensionError("bump: dimension mismatch");
  double r = default_bump_radius(chart, p);
  if (rho) {
    if (!(*rho > 0)) throw RadiusError("bump radius must be positive");
    const Box& dom = chart.domain();
    for (int i = 0; i < chart.dim(); ++i) {
      const auto& per = chart.periods();
      if (i < static_cast<int>(per.size()) && per[i]) {
        if (*rho > 0.5 * *per[i]) throw RadiusError("bump radius exceeds half a period");
        continue;
      }
      if (p(i) - *rho <= dom.lo[i] || p(i) + *rho >= dom.hi[i]) throw RadiusError("bump does not fit in the chart");
    }
    r = *rho;
  }
  const int n = chart.dim();
  BumpField::Core core = [value, gradient, n](const Point&, const Vec& d) {
    return Jet2(value + gradient.dot(d), gradient, Mat::Zero(n, n));
  };
  return std::make_shared<BumpField>(p, r, core, chart.periods());
}

MetricFieldPtr PerturbationFamily::member(int n) const {
  return rescale(base, std::make_shared<ScaledScalarField>(phi, 1.0 / n));
}

bool PerturbationFamily::all_signs_ok() const {
  for (const auto& c : certificates)
    if (!c.sign_ok) return false;
  return !certificates.empty();
}

bool PerturbationFamily::monotone_to_zero() const {
  for (std::size_t i = 1; i < certificates.size(); ++i)
    if (!(std::abs(certificates[i].direct) < std::abs(certificates[i - 1].direct))) return false;
  return true;
}

namespace {

double agreement(double a, double b) {
  double s = std::max(std::abs(a), std::abs(b));
  return s > 0 ? std::abs(a - b) / s : 0.0;
}

struct Seminorms {
  double c0 = 0, c1 = 0, c2 = 0;
};

Seminorms all_seminorms(const MetricField& g1, const MetricField& g2, const Box& K, int points) {
  const int n = g1.dim();
  Seminorms out;
  std::vector<int> idx(n, 0);
  for (;;) {
    Point x(n);
    for (int i = 0; i < n; ++i)
      x(i) = points > 1 ? K.lo[i] + (K.hi[i] - K.lo[i]) * idx[i] / (points - 1) : 0.5 * (K.lo[i] + K.hi[i]);
    MetricJet a = g1.jet(x), b = g2.jet(x);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const Jet2 &ja = a(i, j), &jb = b(i, j);
        out.c0 = std::max(out.c0, std::abs(ja.value - jb.value));
        out.c1 = std::max(out.c1, (ja.gradient - jb.gradient).cwiseAbs().maxCoeff());
        out.c2 = std::max(out.c2, (ja.hessian - jb.hessian).cwiseAbs().maxCoeff());
      }
    int k = n - 1;
    while (k >= 0 && ++idx[k] == points) idx[k--] = 0;
    if (k < 0) break;
  }
  out.c1 = std::max(out.c1, out.c0);
  out.c2 = std::max(out.c2, out.c1);
  return out;
}

bool box_contains(const Box& outer, const Box& inner) {
  for (int i = 0; i < outer.dim(); ++i)
    if (inner.lo[i] < outer.lo[i] || inner.hi[i] > outer.hi[i]) return false;
  return true;
}

void fill_seminorms(PerturbationFamily& fam, const FamilyOptions& opt) {
  if (!opt.seminorms) return;
  Box K = fam.phi->support_box();
  std::vector<double> ns, c2;
  for (int n = 1; n <= opt.n_max; ++n) {
    Seminorms s = all_seminorms(*fam.member(n), *fam.base, K, opt.seminorm_grid);
    fam.seminorms.push_back({n, s.c0, s.c1, s.c2});
    ns.push_back(n);
    c2.push_back(s.c2);
  }
  if (opt.n_max >= 2) fam.seminorm_slope = loglog_slope(ns, c2);
}

/// Extend g-orthonormal vectors (first may be timelike) to a full g-orthonormal frame.
Mat complete_frame(const MetricValue& m, const std::vector<Vec>& given) {
  const int n = m.dim();
  std::vector<Vec> basis = given;
  std::vector<double> eps;
  for (const Vec& b : given) eps.push_back(m.inner(b, b) < 0 ? -1.0 : 1.0);
  std::vector<Vec> cand;
  for (int i = 0; i < n; ++i) cand.push_back(unit_vec(n, i));
  std::vector<bool> used(n, false);
  while (static_cast<int>(basis.size()) < n) {
    int best = -1;
    double best_q = 0;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      Vec c = cand[i];
      for (std::size_t k = 0; k < basis.size(); ++k) c -= eps[k] * m.inner(c, basis[k]) * basis[k];
      cand[i] = c;
      double q = std::abs(m.inner(c, c));
      if (q > best_q) {
        best_q = q;
        best = i;
      }
    }
    if (best < 0) throw NotApplicable("cannot complete an orthonormal frame");
    used[best] = true;
    Vec e = cand[best];
    double q = m.inner(e, e);
    e /= std::sqrt(std::abs(q));
    basis.push_back(e);
    eps.push_back(q < 0 ? -1.0 : 1.0);
  }
  Mat E(n, n);
  for (int i = 0; i < n; ++i) E.col(i) = basis[i];
  return E;
}

double riem_contract(const TensorValue& R, const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
  const int n = R.dim();
  const auto& comp = R.components();
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += comp[((i * n + j) * n + k) * n + l] * a(i) * b(j) * c(k) * d(l);
  return s;
}

}  // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t k = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

SeminormResult cs_seminorm(const MetricField& g1, const MetricField& g2, int s, const Box& K, int points_per_axis,
                           const BumpField* support) {
  if (s < 0 || s > 2) throw DomainError("seminorm order must be 0, 1 or 2");
  Seminorms all = all_seminorms(g1, g2, K, points_per_axis);
  SeminormResult r;
  r.value = s == 0 ? all.c0 : s == 1 ? all.c1 : all.c2;
  if (support) r.support_not_contained = !box_contains(K, support->support_box());
  return r;
}

PerturbationFamily trapped_family(MetricFieldPtr g, const VectorField& X, const Embedding& s, const Vec& u,
                                const FamilyOptions& opt) {
  if (s.codim() < 2) throw WrongCodimension("the trapped-set construction needs codimension >= 2");
  const Tolerances& tol = opt.tol;
  MeanCurvature mc = mean_curv(*g, X, s, u, tol);
  const Point p = mc.base;
  MetricValue m = g->value(p);
  Mat J = s.jacobian(u);
  const double hn = mc.H.norm();

  PerturbationFamily fam;
  fam.base = g;
  fam.p = p;
  fam.m = s.param_dim();
  fam.expected_sign = "positive";
  Vec v;
  if (hn <= tol.tau_trap) {
    fam.construction = "trapped_zero";
    fam.printed_formula = "(m^2/n) exp(-2 phi_n(p)) g(v,v)";
    // spacelike unit normal
    auto [a, b] = future_null_normals(m, J, X.at(p));
    Vec S = a / std::sqrt(-m.inner(a, b)) - b / std::sqrt(-m.inner(a, b));
    v = S / S.norm();
  } else {
    const double gHH = mc.g_HH / (hn * hn);
    const double gHX = mc.g_HX / (hn * X.at(p).norm());
    if (gHH < -tol.tau_trap && gHX > tol.tau_trap)
      throw NotApplicable("submanifold is future-trapped at this point");
    if (mc.causal.causal != Causal::null || mc.causal.orientation != Orientation::past)
      throw NotApplicable("submanifold is not weakly future-trapped at this point");
    fam.construction = "trapped_null";
    fam.printed_formula = "-(2m/n) exp(2 phi_n(p)) g(H,v)";
    auto [a, b] = future_null_normals(m, J, X.at(p));
    Vec Hu = mc.H / hn;
    // the future null normal least aligned with -H, reversed to past
    double ca = std::abs(a.dot(Hu)), cb = std::abs(b.dot(Hu));
    v = -(ca < cb ? a : b);
  }
  fam.v = v;
  fam.phi = bump(*g, p, 0.0, m.lower(v), opt.radius);

  const double k = fam.m;
  const double gvv = m.inner(v, v), gHv = m.inner(mc.H, v);
  for (int n = 1; n <= opt.n_max; ++n) {
    auto f = std::make_shared<ScaledScalarField>(fam.phi, 1.0 / n);
    Certificate c;
    c.n = n;
    c.closed_form = conformal_mean(*g, X, s, *f, u, tol).norm;
    c.direct = mean_curv(*fam.member(n), X, s, u, tol).g_HH;
    const double fp = f->value(p);
    c.printed = fam.construction == "trapped_zero" ? (k * k / n) * std::exp(-2 * fp) * gvv
                                                   : -(2 * k / n) * std::exp(2 * fp) * gHv;
    c.agreement = agreement(c.closed_form, c.direct);
    c.deviation = c.printed != 0 ? c.direct / c.printed : std::numeric_limits<double>::infinity();
    c.sign_ok = c.direct > 0 && c.closed_form > 0;
    fam.certificates.push_back(c);
  }
  fill_seminorms(fam, opt);
  return fam;
}

PerturbationFamily curvature_family(MetricFieldPtr g, const Point& p, const Vec& v_in, const Vec& w_in,
                                const FamilyOptions& opt) {
  const int n = g->dim();
  if (v_in.size() != n || w_in.size() != n) throw DimensionError("witness vectors have wrong dimension");
  const Tolerances& tol = opt.tol;
  LocalGeometry geo = local_geometry(*g, p);
  const MetricValue& m = geo.metric();
  if (v_in.norm() < tol.tau_zero) throw NotApplicable("v is zero");
  const double q = m.inner(v_in, v_in);
  if (q > tol.tau_c * v_in.squaredNorm()) throw NotApplicable("v is not causal");
  Vec vh = v_in / v_in.norm();
  Vec wperp = w_in - w_in.dot(vh) * vh;
  if (wperp.norm() < 1e-9 * w_in.norm()) throw NotApplicable("w is collinear with v");
  const double r0 = geo.riem(w_in / w_in.norm(), vh, vh, w_in / w_in.norm());
  if (std::abs(r0) > tol.tau_cond) throw NotApplicable("Riem(w,v,v,w) does not vanish at p");

  PerturbationFamily fam;
  fam.base = g;
  fam.p = p;
  fam.expected_sign = "negative";
  Mat E;
  std::function<Jet2(const std::vector<Jet2>&)> xi;
  std::function<double(int)> printed;
  if (q < -tol.tau_c * v_in.squaredNorm()) {
    fam.construction = "curvature_timelike";
    fam.printed_formula = "-exp(2/n)/n";
    Vec v = v_in / std::sqrt(-q);
    Vec w = w_in + m.inner(w_in, v) * v;
    w /= std::sqrt(m.inner(w, w));
    fam.v = v;
    fam.w = w;
    E = complete_frame(m, {v, w});
    xi = [](const std::vector<Jet2>& x) { return exp(x[0]); };
    printed = [](int k) { return -std::exp(2.0 / k) / k; };
  } else {
    Vec u = orthonormal_frame(m).col(0);
    double c = -m.inner(u, v_in);
    if (c < 0) {
      u = -u;
      c = -c;
    }
    const double alpha = 1.0 / c, beta = 0.5 * (1.0 - 1.0 / (c * c));
    Vec e1 = alpha * u + beta * v_in;
    Vec e2 = v_in - e1;
    Vec ell = e1 - e2;
    const double a = -m.inner(w_in, ell) / 2.0, b = -m.inner(w_in, v_in) / 2.0;
    Vec w = w_in - a * v_in;  // the v-part does not contribute
    Vec rest = w - b * ell;
    fam.v = v_in;
    E = complete_frame(m, {e1, e2});
    if (m.inner(rest, rest) > 1e-9 * w.squaredNorm()) {
      fam.construction = "curvature_null_spacelike";
      fam.printed_formula = "-(4/n) g(w,w)";
      fam.w = w;
      const double gww = m.inner(w, w);
      xi = [](const std::vector<Jet2>& x) {
        Jet2 s = x[0] + x[1];
        return s * s;
      };
      printed = [gww](int k) { return -4.0 * gww / k; };
    } else {
      if (std::abs(b) < 1e-12) throw NotApplicable("w is collinear with v");
      fam.construction = "curvature_null_null";
      fam.printed_formula = "-8/n";
      fam.w = ell;
      xi = [](const std::vector<Jet2>& x) { return x[0] * x[0]; };
      printed = [](int k) { return -8.0 / k; };
    }
  }

  NormalChart chart = normal_chart(g, p, E);
  const double rho = bump(*g, p, 0.0, Vec::Zero(n), opt.radius)->radius();
  BumpField::Core core = [chart, xi](const Point& x, const Vec&) { return xi(chart.quadratic_coordinates(x)); };
  fam.phi = std::make_shared<BumpField>(p, rho, core, g->periods());

  for (int k = 1; k <= opt.n_max; ++k) {
    auto f = std::make_shared<ScaledScalarField>(fam.phi, 1.0 / k);
    Certificate c;
    c.n = k;
    c.closed_form = riem_contract(conformal_riemann(*g, *f, p), fam.w, fam.v, fam.v, fam.w);
    c.direct = local_geometry(*fam.member(k), p).riem(fam.w, fam.v, fam.v, fam.w);
    c.printed = printed(k);
    c.agreement = agreement(c.closed_form, c.direct);
    c.deviation = c.printed != 0 ? c.direct / c.printed : std::numeric_limits<double>::infinity();
    c.sign_ok = c.direct < 0 && c.closed_form < 0;
    fam.certificates.push_back(c);
  }
  fill_seminorms(fam, opt);
  return fam;
}

std::optional<Witness> find_witness(const MetricField& g, const Point& p, std::uint64_t seed, int samples,
                                    double tau) {
  LocalGeometry geo = local_geometry(g, p);
  const MetricValue& m = geo.metric();
  const int n = m.dim();
  Mat E = orthonormal_frame(m);
  Rng rng(seed);
  std::optional<Witness> best;
  for (int k = 0; k < samples; ++k) {
    Vec s(n - 1);
    for (int i = 0; i < n - 1; ++i) s(i) = rng.normal();
    double radius = (k % 2 == 0) ? 1.0 : std::pow(rng.uniform(), 1.0 / (n - 1));
    s *= radius / s.norm();
    Vec v = E.col(0);
    for (int i = 1; i < n; ++i) v += s(i - 1) * E.col(i);
    v /= v.norm();
    Mat vm = v;
    Eigen::HouseholderQR<Mat> qr(vm);
    Mat Q = Mat(qr.householderQ()).rightCols(n - 1);
    Mat M = Q.transpose() * geo.tidal_form(v) * Q;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.transpose()));
    int idx = 0;
    es.eigenvalues().cwiseAbs().minCoeff(&idx);
    double val = es.eigenvalues()(idx);
    if (!best || std::abs(val) < std::abs(best->value)) best = Witness{v, Q * es.eigenvectors().col(idx), val};
  }
  if (best && std::abs(best->value) <= tau) return best;
  return std::nullopt;
}

}  // namespace lorentz
