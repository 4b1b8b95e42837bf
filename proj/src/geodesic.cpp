#include "lorentz/geodesic.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "lorentz/errors.hpp"
#include "lorentz/ode.hpp"

namespace lorentz {

namespace {

ode::State geodesic_rhs(const MetricField& g, const ode::State& y, int n) {
  Point x = y.head(n);
  Vec v = y.segment(n, n);
  LocalGeometry geo(g.jet(x), false);
  ode::State dy(y.size());
  dy.head(n) = v;
  dy.segment(n, n) = -geo.gamma_contract(v, v);
  // transported vectors, if any
  const int extra = static_cast<int>(y.size()) / n - 2;
  for (int j = 0; j < extra; ++j) {
    Vec w = y.segment((2 + j) * n, n);
    dy.segment((2 + j) * n, n) = -geo.gamma_contract(v, w);
  }
  return dy;
}

}  // namespace

GeodesicSolution geodesic(const MetricField& g, const Point& p, const Vec& v, double length,
                          const GeodesicOptions& opt) {
  const int n = g.dim();
  if (p.size() != n || v.size() != n) throw DimensionError("geodesic: dimension mismatch");
  if (v.norm() < 1e-12) throw DomainError("geodesic: zero initial velocity");
  if (!g.in_domain(p)) throw DomainError("geodesic: start point outside the chart domain");

  ode::Settings st;
  st.tol = opt.eps_geo * 1e-3;
  st.initial_step = opt.initial_step;
  st.min_step = opt.min_step;
  st.max_step = opt.max_step > 0 ? opt.max_step : std::max(std::abs(length) / 32.0, 1e-6);
  st.max_steps = opt.max_steps;

  ode::State y0(2 * n);
  y0.head(n) = p;
  y0.segment(n, n) = v;
  auto rhs = [&g, n](const ode::State& y) { return geodesic_rhs(g, y, n); };
  auto valid = [&g, n](const ode::State& y) { return g.in_domain(Point(y.head(n))); };
  ode::Trajectory tr = ode::integrate(rhs, y0, length, st, valid);

  GeodesicSolution sol;
  sol.requested_length = length;
  sol.chart_exit = tr.exited;
  sol.rejected_steps = tr.rejected;
  sol.s = tr.s;
  sol.steps = tr.steps;
  sol.initial_norm = g.value(p).inner(v, v);
  for (const auto& y : tr.y) {
    Point x = y.head(n);
    Vec u = y.segment(n, n);
    sol.points.push_back(x);
    sol.canonical.push_back(g.canonical(x));
    sol.velocities.push_back(u);
    sol.max_norm_drift = std::max(sol.max_norm_drift, std::abs(g.value(x).inner(u, u) - sol.initial_norm));
  }
  return sol;
}

std::vector<std::vector<Vec>> parallel_transport(const MetricField& g, const GeodesicSolution& gamma,
                                                 const std::vector<Vec>& w0) {
  const int n = g.dim();
  const int k = static_cast<int>(w0.size());
  std::vector<std::vector<Vec>> out;
  out.reserve(gamma.size());
  out.push_back(w0);
  auto rhs = [&g, n](const ode::State& y) { return geodesic_rhs(g, y, n); };
  ode::State y((2 + k) * n), y5, err;
  std::vector<Vec> cur = w0;
  for (std::size_t i = 0; i + 1 < gamma.size(); ++i) {
    y.head(n) = gamma.points[i];
    y.segment(n, n) = gamma.velocities[i];
    for (int j = 0; j < k; ++j) y.segment((2 + j) * n, n) = cur[j];
    ode::dp_step(rhs, y, gamma.steps[i], y5, err);
    for (int j = 0; j < k; ++j) cur[j] = y5.segment((2 + j) * n, n);
    out.push_back(cur);
  }
  return out;
}

std::vector<Vec> parallel_transport(const MetricField& g, const GeodesicSolution& gamma, const Vec& w0) {
  auto all = parallel_transport(g, gamma, std::vector<Vec>{w0});
  std::vector<Vec> out;
  out.reserve(all.size());
  for (auto& a : all) out.push_back(a[0]);
  return out;
}

GenericResult generic_check(const MetricField& g, const GeodesicSolution& gamma, double tau) {
  const int n = g.dim();
  GenericResult r;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const Vec& v = gamma.velocities[i];
    LocalGeometry geo = local_geometry(g, gamma.points[i]);
    Mat A(n, n);  // w -> R(w, v)v
    for (int m = 0; m < n; ++m)
      for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
          for (int c = 0; c < n; ++c) s += geo.rup(m, a, j, c) * v(j) * v(c);
        A(m, a) = s;
      }
    Eigen::JacobiSVD<Mat> svd(A);
    double ratio = svd.singularValues()(0) / v.squaredNorm();
    r.max_ratio = std::max(r.max_ratio, ratio);
    if (!r.satisfied && ratio > tau) {
      r.satisfied = true;
      r.s_star = gamma.s[i];
    }
  }
  return r;
}

}  // namespace lorentz
