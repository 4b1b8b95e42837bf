#pragma once
// Finite-difference reference computations, independent of the jet machinery.

#include <functional>
#include <vector>

#include "lorentz/metric.hpp"

namespace oracle {

using lorentz::Mat;
using lorentz::MetricField;
using lorentz::Point;
using lorentz::Vec;

inline Mat metric_at(const MetricField& g, const Point& p) { return g.value(p).g(); }

/// Γ[k](i, j) from central differences of metric values.
inline std::vector<Mat> christoffel(const MetricField& g, const Point& p, double h = 1e-4) {
  const int n = g.dim();
  std::vector<Mat> dg(n);
  for (int k = 0; k < n; ++k) {
    Point a = p, b = p;
    a(k) += h;
    b(k) -= h;
    dg[k] = (metric_at(g, a) - metric_at(g, b)) / (2 * h);
  }
  Mat gi = metric_at(g, p).inverse();
  std::vector<Mat> G(n, Mat::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int l = 0; l < n; ++l) s += 0.5 * gi(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        G[k](i, j) = s;
      }
  return G;
}

/// R_ijkl = g_lm (∂iΓ^m_jk − ∂jΓ^m_ik + Γ^m_ia Γ^a_jk − Γ^m_ja Γ^a_ik), derivatives of Γ by differences.
inline std::vector<double> riemann(const MetricField& g, const Point& p, double h = 1e-3) {
  const int n = g.dim();
  auto G = christoffel(g, p, h);
  std::vector<std::vector<Mat>> dG(n);
  for (int m = 0; m < n; ++m) {
    Point a = p, b = p;
    a(m) += h;
    b(m) -= h;
    auto Ga = christoffel(g, a, h), Gb = christoffel(g, b, h);
    for (int k = 0; k < n; ++k) dG[m].push_back((Ga[k] - Gb[k]) / (2 * h));
  }
  Mat gm = metric_at(g, p);
  std::vector<double> R(static_cast<std::size_t>(n * n * n * n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0;
          for (int m = 0; m < n; ++m) {
            double r = dG[i][m](j, k) - dG[j][m](i, k);
            for (int a = 0; a < n; ++a) r += G[m](i, a) * G[a](j, k) - G[m](j, a) * G[a](i, k);
            s += gm(l, m) * r;
          }
          R[((i * n + j) * n + k) * n + l] = s;
        }
  return R;
}

/// Mean curvature vector from differences of the embedding and of the metric:
/// H = h^{ab} (x_ab + Γ(x_a, x_b))^⊥.
inline Vec mean_curvature(const MetricField& g, const std::function<Point(const Vec&)>& x, const Vec& u,
                          double h = 1e-4) {
  const int m = static_cast<int>(u.size());
  const Point p = x(u);
  const int n = static_cast<int>(p.size());
  Mat J(n, m);
  for (int a = 0; a < m; ++a) {
    Vec up = u, um = u;
    up(a) += h;
    um(a) -= h;
    J.col(a) = (x(up) - x(um)) / (2 * h);
  }
  const Mat G = metric_at(g, p);
  const auto Gam = oracle::christoffel(g, p);
  const Mat hab = J.transpose() * G * J;
  const Mat hinv = hab.inverse();
  Vec H = Vec::Zero(n);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      Vec ua = u, ub = u, uab = u;
      ua(a) += h;
      ub(b) += h;
      uab(a) += h;
      uab(b) += h;
      Vec x2 = (x(uab) - x(ua) - x(ub) + p) / (h * h);
      if (a == b) {
        Vec up = u, um = u;
        up(a) += h;
        um(a) -= h;
        x2 = (x(up) - 2 * p + x(um)) / (h * h);
      }
      for (int k = 0; k < n; ++k) x2(k) += J.col(a).dot(Gam[k] * J.col(b));
      H += hinv(a, b) * x2;
    }
  // Remove the tangential part.
  const Vec t = hinv * (J.transpose() * G * H);
  return H - J * t;
}

}  // namespace oracle
