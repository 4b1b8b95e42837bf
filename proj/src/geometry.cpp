#include "lorentz/geometry.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "lorentz/errors.hpp"

namespace lorentz {

LocalGeometry::LocalGeometry(const MetricJet& jet, bool with_curvature)
    : n_(jet.dim()), metric_(jet.value()) {
  const int n = n_;
  const Mat& gi = metric_.inverse();

  // first kind: G[l][i][j] = ½(∂i g_jl + ∂j g_il − ∂l g_ij)
  std::vector<double> first(static_cast<std::size_t>(n * n * n));
  auto F = [&](int l, int i, int j) -> double& { return first[(l * n + i) * n + j]; };
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double v = 0.5 * (jet.d(i, j, l) + jet.d(j, i, l) - jet.d(l, i, j));
        F(l, i, j) = v;
        F(l, j, i) = v;
      }

  gamma_.assign(static_cast<std::size_t>(n * n * n), 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += gi(k, l) * F(l, i, j);
        gamma_[(k * n + i) * n + j] = s;
        gamma_[(k * n + j) * n + i] = s;
      }

  if (!with_curvature) return;

  // ∂m g^{kl} = −g^{ka} ∂m g_ab g^{bl}
  std::vector<Mat> dginv(n);
  for (int m = 0; m < n; ++m) {
    Mat dg(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) dg(a, b) = jet.d(m, a, b);
    dginv[m] = -gi * dg * gi;
  }

  dgamma_.assign(static_cast<std::size_t>(n * n * n * n), 0.0);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Vec dfirst(n);
        for (int l = 0; l < n; ++l)
          dfirst(l) = 0.5 * (jet.dd(m, i, j, l) + jet.dd(m, j, i, l) - jet.dd(m, l, i, j));
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) s += dginv[m](k, l) * F(l, i, j) + gi(k, l) * dfirst(l);
          dgamma_[((m * n + k) * n + i) * n + j] = s;
          dgamma_[((m * n + k) * n + j) * n + i] = s;
        }
      }

  rup_.assign(static_cast<std::size_t>(n * n * n * n), 0.0);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        for (int k = 0; k < n; ++k) {
          double s = dgamma(i, m, j, k) - dgamma(j, m, i, k);
          for (int a = 0; a < n; ++a) s += gamma(m, i, a) * gamma(a, j, k) - gamma(m, j, a) * gamma(a, i, k);
          rup_[((m * n + i) * n + j) * n + k] = s;
        }
      }

  riem_.assign(static_cast<std::size_t>(n * n * n * n), 0.0);
  const Mat& g = metric_.g();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += g(l, m) * rup(m, i, j, k);
          riem_[((i * n + j) * n + k) * n + l] = s;
        }

  ricci_ = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += rup(i, i, j, k);
      ricci_(j, k) = s;
    }
  ricci_ = 0.5 * (ricci_ + ricci_.transpose()).eval();
}

double LocalGeometry::ricci_scalar() const { return (metric_.inverse().cwiseProduct(ricci_)).sum(); }

double LocalGeometry::kretschmann() const {
  // R_ijkl R^ijkl
  const int n = n_;
  const Mat& gi = metric_.inverse();
  // raise all four indices one at a time
  std::vector<double> cur = riem_, nxt(riem_.size());
  for (int slot = 0; slot < 4; ++slot) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            int idx[4] = {i, j, k, l};
            double s = 0.0;
            for (int a = 0; a < n; ++a) {
              int src[4] = {i, j, k, l};
              src[slot] = a;
              s += gi(idx[slot], a) * cur[((src[0] * n + src[1]) * n + src[2]) * n + src[3]];
            }
            nxt[((i * n + j) * n + k) * n + l] = s;
          }
    std::swap(cur, nxt);
  }
  double total = 0.0;
  for (std::size_t q = 0; q < riem_.size(); ++q) total += riem_[q] * cur[q];
  return total;
}

Vec LocalGeometry::gamma_contract(const Vec& x, const Vec& y) const {
  Vec out = Vec::Zero(n_);
  for (int k = 0; k < n_; ++k) {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) {
      if (x(i) == 0.0) continue;
      for (int j = 0; j < n_; ++j) s += gamma(k, i, j) * x(i) * y(j);
    }
    out(k) = s;
  }
  return out;
}

double LocalGeometry::riem(const Vec& a, const Vec& b, const Vec& c, const Vec& d) const {
  const int n = n_;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    if (a(i) == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (b(j) == 0.0 || i == j) continue;
      for (int k = 0; k < n; ++k) {
        if (c(k) == 0.0) continue;
        double t = 0.0;
        for (int l = 0; l < n; ++l) t += riem(i, j, k, l) * d(l);
        s += a(i) * b(j) * c(k) * t;
      }
    }
  }
  return s;
}

Vec LocalGeometry::curvature(const Vec& x, const Vec& y, const Vec& z) const {
  const int n = n_;
  Vec out = Vec::Zero(n);
  for (int m = 0; m < n; ++m) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) s += rup(m, i, j, k) * x(i) * y(j) * z(k);
    out(m) = s;
  }
  return out;
}

Mat LocalGeometry::tidal_form(const Vec& v) const {
  const int n = n_;
  Mat M = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) s += riem(a, j, k, b) * v(j) * v(k);
      M(a, b) = s;
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < a; ++b) M(a, b) = M(b, a);
  return M;
}

TensorValue LocalGeometry::christoffel_tensor() const {
  return TensorValue(n_, {Variance::upper, Variance::lower, Variance::lower}, gamma_);
}

TensorValue LocalGeometry::riemann_tensor() const {
  return TensorValue(n_, {Variance::lower, Variance::lower, Variance::lower, Variance::lower}, riem_);
}

TensorValue LocalGeometry::ricci_tensor() const { return TensorValue::matrix(ricci_, Variance::lower, Variance::lower); }

LocalGeometry local_geometry(const MetricField& g, const Point& p, bool with_curvature) {
  if (p.size() != g.dim()) throw DimensionError("point dimension does not match chart");
  return LocalGeometry(g.jet(p), with_curvature);
}

const char* to_string(Causal c) {
  switch (c) {
    case Causal::timelike: return "timelike";
    case Causal::null: return "null";
    case Causal::spacelike: return "spacelike";
    case Causal::zero: return "zero";
  }
  return "?";
}

const char* to_string(Orientation o) {
  switch (o) {
    case Orientation::future: return "future";
    case Orientation::past: return "past";
    case Orientation::none: return "none";
  }
  return "?";
}

int signature(const MetricField& g, const Point& p) { return g.value(p).index(); }

CausalClass causal_class(const MetricValue& m, const Vec& v, const Vec& X, double tau_c, double tau_zero) {
  double xx = m.inner(X, X);
  if (!(xx < -tau_c * X.squaredNorm())) throw OrientationError("orientation field is not timelike at the base point");
  double h2 = v.squaredNorm();
  if (std::sqrt(h2) < tau_zero) return {Causal::zero, Orientation::none};
  double q = m.inner(v, v);
  Causal c;
  if (q < -tau_c * h2)
    c = Causal::timelike;
  else if (q > tau_c * h2)
    c = Causal::spacelike;
  else
    c = Causal::null;
  if (c == Causal::spacelike) return {c, Orientation::none};
  return {c, m.inner(v, X) < 0.0 ? Orientation::future : Orientation::past};
}

CausalClass causal_class(const MetricField& g, const TangentVector& v, const VectorField& X, double tau_c,
                         double tau_zero) {
  return causal_class(g.value(v.base), v.components, X.at(v.base), tau_c, tau_zero);
}

TensorValue christoffel(const MetricField& g, const Point& p) { return local_geometry(g, p, false).christoffel_tensor(); }
TensorValue riemann(const MetricField& g, const Point& p) { return local_geometry(g, p).riemann_tensor(); }
TensorValue ricci(const MetricField& g, const Point& p) { return local_geometry(g, p).ricci_tensor(); }

Mat orthonormal_frame(const MetricValue& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m.g());
  const int n = m.dim();
  Mat E(n, n);
  for (int i = 0; i < n; ++i) E.col(i) = es.eigenvectors().col(i) / std::sqrt(std::abs(es.eigenvalues()(i)));
  return E;
}

std::vector<Vec> screen_basis(const MetricValue& m, const Vec& v, const Vec* ell) {
  const int n = m.dim();
  std::vector<Vec> cand;
  Vec vhat = v;
  if (!ell) vhat = v / std::sqrt(-m.inner(v, v));
  for (int i = 0; i < n; ++i) {
    Vec e = unit_vec(n, i);
    Vec c = ell ? Vec(e + m.inner(e, *ell) * v + m.inner(e, v) * *ell) : Vec(e + m.inner(e, vhat) * vhat);
    cand.push_back(c);
  }
  const int want = ell ? n - 2 : n - 1;
  std::vector<Vec> basis;
  std::vector<bool> used(n, false);
  for (int round = 0; round < want; ++round) {
    int best = -1;
    double best_q = 0.0;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      for (const Vec& b : basis) cand[i] -= m.inner(cand[i], b) * b;
      double q = m.inner(cand[i], cand[i]);
      if (q > best_q) {
        best_q = q;
        best = i;
      }
    }
    if (best < 0) throw NotCausal("screen space is not positive definite");
    used[best] = true;
    Vec e = cand[best] / std::sqrt(best_q);
    // one re-orthogonalization pass for accuracy
    for (const Vec& b : basis) e -= m.inner(e, b) * b;
    e /= std::sqrt(m.inner(e, e));
    basis.push_back(e);
  }
  return basis;
}

TidalOperator tidal(const LocalGeometry& geo, const Vec& v, bool unit_timelike, double tau_c) {
  const MetricValue& m = geo.metric();
  const int n = m.dim();
  double h2 = v.squaredNorm();
  if (std::sqrt(h2) < 1e-12) throw NotCausal("zero vector has no tidal operator");
  double q = m.inner(v, v);
  if (q > tau_c * h2) throw NotCausal("tidal operator requires a causal vector");
  TidalOperator t;
  if (q < -tau_c * h2) {
    t.v = unit_timelike ? Vec(v / std::sqrt(-q)) : v;
    t.screen = screen_basis(m, v, nullptr);
  } else {
    t.null = true;
    t.v = v;
    Vec u = orthonormal_frame(m).col(0);
    double c = m.inner(u, v);
    t.ell = -(u + v / (2.0 * c)) / c;
    t.screen = screen_basis(m, v, &t.ell);
  }
  Mat T = geo.tidal_form(t.v);
  const int k = static_cast<int>(t.screen.size());
  t.matrix = Mat::Zero(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) t.matrix(a, b) = t.screen[a].dot(T * t.screen[b]);
  if (k > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> es(t.matrix, Eigen::EigenvaluesOnly);
    t.eigenvalues = es.eigenvalues();
  } else {
    t.eigenvalues = Vec::Zero(0);
  }
  (void)n;
  return t;
}

TidalOperator tidal(const MetricField& g, const TangentVector& v, double tau_c) {
  return tidal(local_geometry(g, v.base), v.components, true, tau_c);
}

}  // namespace lorentz
