#include "lorentz/conformal.hpp"

#include <cmath>

namespace lorentz {

MetricFieldPtr rescale(MetricFieldPtr g, ScalarFieldPtr f) {
  return std::make_shared<ConformalMetricField>(std::move(g), std::move(f));
}

Vec connection_delta(const MetricField& g, const ScalarField& f, const Point& p, const Vec& X, const Vec& Y) {
  MetricValue m = g.value(p);
  Jet2 fj = f.jet(g.canonical(p));
  Vec grad = m.raise(fj.gradient);
  return X.dot(fj.gradient) * Y + Y.dot(fj.gradient) * X - m.inner(X, Y) * grad;
}

ConformalMean conformal_mean(const MetricField& g, const VectorField& X, const Embedding& s, const ScalarField& f,
                             const Vec& u, const Tolerances& tol) {
  MeanCurvature mc = mean_curv(g, X, s, u, tol);
  MetricValue m = g.value(mc.base);
  Jet2 fj = f.jet(g.canonical(mc.base));
  const double k = s.param_dim();
  ConformalMean out;
  out.H = mc.H;
  out.f = fj.value;
  out.grad_perp = normal_part(m, s.jacobian(u), m.raise(fj.gradient));
  const double e = std::exp(-2.0 * fj.value);
  out.H_hat = e * (mc.H - k * out.grad_perp);
  out.norm = e * (m.inner(mc.H, mc.H) - 2 * k * m.inner(mc.H, m.raise(fj.gradient)) +
                  k * k * m.inner(out.grad_perp, out.grad_perp));
  return out;
}

namespace {

// (h ⊙ k)(w,x,y,z) = h(w,z)k(x,y) + h(x,y)k(w,z) - h(w,y)k(x,z) - h(x,z)k(w,y)
double kulkarni_nomizu(const Mat& h, const Mat& k, int w, int x, int y, int z) {
  return h(w, z) * k(x, y) + h(x, y) * k(w, z) - h(w, y) * k(x, z) - h(x, z) * k(w, y);
}

double rel(double err, double scale) { return err / std::max(scale, 1e-300); }

}  // namespace

TensorValue conformal_riemann(const MetricField& g, const ScalarField& f, const Point& p) {
  LocalGeometry geo = local_geometry(g, p);
  const MetricValue& m = geo.metric();
  const int n = geo.dim();
  Jet2 fj = f.jet(g.canonical(p));
  const Vec& df = fj.gradient;
  Mat hess = fj.hessian;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) hess(i, j) -= geo.gamma(k, i, j) * df(k);
  Mat A = hess - df * df.transpose() + 0.5 * df.dot(m.inverse() * df) * m.g();
  const double e = std::exp(2.0 * fj.value);
  TensorValue R(n, {Variance::lower, Variance::lower, Variance::lower, Variance::lower});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          R({i, j, k, l}) = e * (geo.riem(i, j, k, l) - kulkarni_nomizu(A, m.g(), i, j, k, l));
  return R;
}

OracleComparison compare_connection_delta(const MetricFieldPtr& g, const ScalarFieldPtr& f, const Point& p,
                                          const Vec& X, const Vec& Y) {
  Vec closed = connection_delta(*g, *f, p, X, Y);
  auto gh = rescale(g, f);
  Vec direct = local_geometry(*gh, p, false).gamma_contract(X, Y) - local_geometry(*g, p, false).gamma_contract(X, Y);
  OracleComparison c;
  c.closed = closed.norm();
  c.direct = direct.norm();
  c.abs_error = (closed - direct).norm();
  c.rel_error = rel(c.abs_error, std::max({c.closed, c.direct, 1e-12}));
  return c;
}

OracleComparison compare_mean(const MetricFieldPtr& g, const VectorField& X, const Embedding& s,
                              const ScalarFieldPtr& f, const Vec& u, const Tolerances& tol) {
  ConformalMean cm = conformal_mean(*g, X, s, *f, u, tol);
  auto gh = rescale(g, f);
  MeanCurvature direct = mean_curv(*gh, X, s, u, tol);
  OracleComparison c;
  c.closed = cm.norm;
  c.direct = direct.g_HH;
  double vec_err = (cm.H_hat - direct.H).norm() / std::max({cm.H_hat.norm(), direct.H.norm(), 1e-12});
  c.abs_error = std::abs(cm.norm - direct.g_HH);
  // scale: the size of the individual terms, so cancellations do not inflate the error
  double gmax = g->value(direct.base).g().cwiseAbs().maxCoeff();
  double scale = std::max({std::abs(cm.norm), std::abs(direct.g_HH),
                           std::exp(2.0 * cm.f) * gmax * cm.H_hat.squaredNorm(), 1e-12});
  c.rel_error = std::max(rel(c.abs_error, scale), vec_err);
  return c;
}

OracleComparison compare_riemann(const MetricFieldPtr& g, const ScalarFieldPtr& f, const Point& p) {
  TensorValue closed = conformal_riemann(*g, *f, p);
  TensorValue direct = riemann(*rescale(g, f), p);
  OracleComparison c;
  c.closed = closed.max_abs();
  c.direct = direct.max_abs();
  c.abs_error = (closed + direct * -1.0).max_abs();
  c.rel_error = rel(c.abs_error, std::max({c.closed, c.direct, 1e-12}));
  return c;
}

}  // namespace lorentz
