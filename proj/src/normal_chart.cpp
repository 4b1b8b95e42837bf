#include "lorentz/normal_chart.hpp"

#include <cmath>

#include <Eigen/LU>

#include "lorentz/errors.hpp"
#include "lorentz/ode.hpp"

namespace lorentz {

NormalChart::NormalChart(MetricFieldPtr g, Point p, Mat frame, double radius, GeodesicOptions opt)
    : g_(std::move(g)), p_(std::move(p)), frame_(std::move(frame)), radius_(radius), opt_(opt) {
  frame_inv_ = frame_.inverse();
  LocalGeometry geo = local_geometry(*g_, p_, false);
  const int n = dim();
  for (int k = 0; k < n; ++k) {
    Mat G(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) G(a, b) = geo.gamma(k, a, b);
    gamma_p_.push_back(G);
  }
}

void NormalChart::integrate(const Vec& x, Point* y, Mat* J) const {
  const int n = dim();
  if (x.norm() == 0.0) {
    if (y) *y = p_;
    if (J) *J = frame_;
    return;
  }
  const MetricField& g = *g_;
  // state: position, velocity, J columns, J' columns
  ode::State s0 = ode::State::Zero(2 * n + 2 * n * n);
  s0.head(n) = p_;
  s0.segment(n, n) = frame_ * x;
  for (int c = 0; c < n; ++c) s0.segment(2 * n + n * n + c * n, n) = frame_.col(c);
  const bool need_j = J != nullptr;
  auto rhs = [&g, n, need_j](const ode::State& s) {
    Point q = s.head(n);
    Vec v = s.segment(n, n);
    LocalGeometry geo(g.jet(q), need_j);
    ode::State ds = ode::State::Zero(s.size());
    ds.head(n) = v;
    ds.segment(n, n) = -geo.gamma_contract(v, v);
    if (!need_j) return ds;
    // A(k, l) = ∂_l Γ^k_ij v^i v^j ; B(k, j) = Γ^k_ij v^i
    Mat A = Mat::Zero(n, n), B = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          B(k, j) += geo.gamma(k, i, j) * v(i);
          for (int l = 0; l < n; ++l) A(k, l) += geo.dgamma(l, k, i, j) * v(i) * v(j);
        }
    for (int c = 0; c < n; ++c) {
      Vec Jc = s.segment(2 * n + c * n, n);
      Vec Kc = s.segment(2 * n + n * n + c * n, n);
      ds.segment(2 * n + c * n, n) = Kc;
      ds.segment(2 * n + n * n + c * n, n) = -A * Jc - 2.0 * B * Kc;
    }
    return ds;
  };
  ode::Settings st;
  st.tol = opt_.eps_geo * 1e-3;
  st.initial_step = 0.1;
  st.max_step = 0.25;
  st.min_step = opt_.min_step;
  st.max_steps = opt_.max_steps;
  if (!need_j) s0.conservativeResize(2 * n);
  auto valid = [&g, n](const ode::State& s) { return g.in_domain(Point(s.head(n))); };
  ode::Trajectory tr = ode::integrate(rhs, s0, 1.0, st, valid);
  if (tr.exited) throw InversionFailure("normal chart: exponential map leaves the chart domain");
  const ode::State& sf = tr.y.back();
  if (y) *y = sf.head(n);
  if (J) {
    J->resize(n, n);
    for (int c = 0; c < n; ++c) J->col(c) = sf.segment(2 * n + c * n, n);
  }
}

Point NormalChart::forward(const Vec& x) const {
  Point y;
  integrate(x, &y, nullptr);
  return y;
}

Mat NormalChart::jacobian(const Vec& x) const {
  Point y;
  Mat J;
  integrate(x, &y, &J);
  return J;
}

Vec NormalChart::displacement(const Point& y) const {
  Vec d = y - p_;
  const auto& per = g_->periods();
  for (int i = 0; i < dim(); ++i)
    if (i < static_cast<int>(per.size()) && per[i]) {
      double L = *per[i];
      d(i) -= L * std::round(d(i) / L);
    }
  return d;
}

Vec NormalChart::inverse(const Point& y) const {
  const int n = dim();
  Vec x = frame_inv_ * displacement(y);
  auto residual = [&](const Point& fx) {
    Vec r = fx - y;
    const auto& per = g_->periods();
    for (int i = 0; i < n; ++i)
      if (i < static_cast<int>(per.size()) && per[i]) r(i) -= *per[i] * std::round(r(i) / *per[i]);
    return r;
  };
  const double scale = 1.0 + y.norm();
  for (int it = 0; it < 40; ++it) {
    Point fx;
    Mat J;
    integrate(x, &fx, &J);
    Vec r = residual(fx);
    double rn = r.norm();
    if (rn <= 1e-12 * scale) return x;
    Vec dx = J.partialPivLu().solve(r);
    double alpha = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 8; ++ls) {
      Vec xt = x - alpha * dx;
      try {
        Vec rt = residual(forward(xt));
        if (rt.norm() < rn) {
          x = xt;
          improved = true;
          break;
        }
      } catch (const InversionFailure&) {
      } catch (const DomainError&) {
      }
      alpha *= 0.5;
    }
    if (!improved) {
      if (rn <= 1e-9 * scale) return x;
      throw InversionFailure("normal chart: Newton iteration stalled");
    }
  }
  Vec r = residual(forward(x));
  if (r.norm() <= 1e-9 * scale) return x;
  throw InversionFailure("normal chart: Newton iteration did not converge");
}

MetricValue NormalChart::pulled_metric(const Vec& x) const {
  Point y;
  Mat J;
  integrate(x, &y, &J);
  Mat G = J.transpose() * g_->value(y).g() * J;
  return MetricValue(0.5 * (G + G.transpose()));
}

TensorValue NormalChart::pulled_christoffel(const Vec& x, double h) const {
  const int n = dim();
  std::vector<Mat> dg(n);
  for (int k = 0; k < n; ++k) {
    Vec e = unit_vec(n, k) * h;
    dg[k] = (pulled_metric(x + e).g() - pulled_metric(x - e).g()) / (2.0 * h);
  }
  Mat gi = pulled_metric(x).inverse();
  TensorValue t(n, {Variance::upper, Variance::lower, Variance::lower});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += 0.5 * gi(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        t({k, i, j}) = s;
      }
  return t;
}

std::vector<Jet2> NormalChart::quadratic_coordinates(const Point& y) const {
  const int n = dim();
  Vec d = displacement(y);
  // q^k = d^k + ½Γ^k(d, d)
  Vec q(n);
  Mat dq(n, n);
  for (int k = 0; k < n; ++k) {
    q(k) = d(k) + 0.5 * d.dot(gamma_p_[k] * d);
    dq.row(k) = unit_vec(n, k).transpose() + (gamma_p_[k] * d).transpose();
  }
  std::vector<Jet2> out;
  for (int i = 0; i < n; ++i) {
    Mat H = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k) H += frame_inv_(i, k) * gamma_p_[k];
    Vec grad = (frame_inv_.row(i) * dq).transpose();
    out.emplace_back(frame_inv_.row(i).dot(q), grad, H);
  }
  return out;
}

NormalChart normal_chart(MetricFieldPtr g, const Point& p, const Mat& frame, double radius, GeodesicOptions opt) {
  const int n = g->dim();
  if (frame.rows() != n || frame.cols() != n) throw DimensionError("normal chart: frame must be n x n");
  MetricValue m = g->value(p);
  Mat gram = frame.transpose() * m.g() * frame;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double expect = i == j ? (gram(i, i) < 0 ? -1.0 : 1.0) : 0.0;
      if (std::abs(gram(i, j) - expect) > 1e-9) throw FrameNotOrthonormal("normal chart: frame is not g-orthonormal");
    }
  double r = radius;
  for (int attempt = 0; attempt <= 8; ++attempt, r *= 0.5) {
    NormalChart chart(g, p, frame, r, opt);
    std::vector<Vec> samples;
    for (int i = 0; i < n; ++i) {
      samples.push_back(0.9 * r * unit_vec(n, i));
      samples.push_back(-0.9 * r * unit_vec(n, i));
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) samples.push_back(0.9 * r * (unit_vec(n, i) + unit_vec(n, j)) / std::sqrt(2.0));
    bool ok = true;
    for (const Vec& x : samples) {
      try {
        Vec back = chart.inverse(chart.forward(x));
        if ((back - x).norm() > 1e-8 * (1.0 + x.norm())) {
          ok = false;
          break;
        }
      } catch (const InversionFailure&) {
        ok = false;
        break;
      } catch (const DomainError&) {
        ok = false;
        break;
      } catch (const StepFailure&) {
        ok = false;
        break;
      }
    }
    if (ok) return chart;
  }
  throw InversionFailure("normal chart: no radius with convergent inversion");
}

}  // namespace lorentz
