#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lorentz/errors.hpp"
#include "lorentz/geodesic.hpp"
#include "lorentz/geometry.hpp"
#include "lorentz/normal_chart.hpp"
#include "lorentz/random.hpp"
#include "oracle.hpp"

using namespace lorentz;
using std::numbers::pi;

namespace {

MetricFieldPtr minkowski4() {
  return make_expr_metric({"t", "x", "y", "z"}, {"-1", "0", "1", "0", "0", "1", "0", "0", "0", "1"});
}

MetricFieldPtr schwarzschild(double M = 1.0) {
  Box dom = Box::unbounded(4);
  dom.lo[1] = 2 * M;
  dom.lo[2] = 0;
  dom.hi[2] = pi;
  return make_expr_metric({"t", "r", "th", "ph"},
                          {"-(1 - 2*M/r)", "0", "1/(1 - 2*M/r)", "0", "0", "r^2", "0", "0", "0", "r^2*sin(th)^2"},
                          {{"M", M}}, {}, dom);
}

MetricFieldPtr eddington_finkelstein(double M = 1.0) {
  Box dom = Box::unbounded(4);
  dom.lo[1] = 0;
  dom.lo[2] = 0;
  dom.hi[2] = pi;
  return make_expr_metric({"v", "r", "th", "ph"},
                          {"-(1 - 2*M/r)", "1", "0", "0", "0", "r^2", "0", "0", "0", "r^2*sin(th)^2"}, {{"M", M}},
                          {}, dom);
}

MetricFieldPtr desitter(double H) {
  return make_expr_metric({"t", "x", "y", "z"},
                          {"-1", "0", "exp(2*H*t)", "0", "0", "exp(2*H*t)", "0", "0", "0", "exp(2*H*t)"}, {{"H", H}});
}

MetricFieldPtr sphere(double a) {
  Box dom = Box::unbounded(2);
  dom.lo[0] = 0;
  dom.hi[0] = pi;
  return make_expr_metric({"th", "ph"}, {"a^2", "0", "a^2*sin(th)^2"}, {{"a", a}}, {}, dom);
}

Point pt(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) p(i++) = x;
  return p;
}

}  // namespace

TEST(Signature, Examples) {
  EXPECT_EQ(signature(*minkowski4(), Point::Zero(4)), 1);
  auto euclid = make_expr_metric({"x", "y", "z"}, {"1", "0", "1", "0", "0", "1"});
  EXPECT_EQ(signature(*euclid, Point::Zero(3)), 0);
  EXPECT_EQ(signature(*eddington_finkelstein(), pt({0, 1, pi / 2, 0})), 1);
}

TEST(CausalClass, MinkowskiExamples) {
  auto g = minkowski4();
  ConstantVectorField X(unit_vec(4, 0));
  Point p = Point::Zero(4);
  auto c = causal_class(*g, {p, unit_vec(4, 0)}, X);
  EXPECT_EQ(c, (CausalClass{Causal::timelike, Orientation::future}));
  c = causal_class(*g, {p, pt({1, 1, 0, 0})}, X);
  EXPECT_EQ(c, (CausalClass{Causal::null, Orientation::future}));
  c = causal_class(*g, {p, pt({-1, -1, 0, 0})}, X);
  EXPECT_EQ(c, (CausalClass{Causal::null, Orientation::past}));
  c = causal_class(*g, {p, pt({0, 1, 0, 0})}, X);
  EXPECT_EQ(c.causal, Causal::spacelike);
  c = causal_class(*g, {p, Vec::Zero(4)}, X);
  EXPECT_EQ(c.causal, Causal::zero);
  ConstantVectorField bad(unit_vec(4, 1));
  EXPECT_THROW(causal_class(*g, {p, unit_vec(4, 0)}, bad), OrientationError);
}

TEST(CausalClass, ScaleInvariance) {
  auto g = schwarzschild();
  Point p = pt({0, 5, 1.2, 0.4});
  ConstantVectorField X(unit_vec(4, 0));
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    Vec v(4);
    for (int k = 0; k < 4; ++k) v(k) = rng.uniform(-1, 1);
    auto c = causal_class(*g, {p, v}, X);
    double lam = rng.uniform(0.1, 10);
    auto cp = causal_class(*g, {p, Vec(lam * v)}, X);
    auto cn = causal_class(*g, {p, Vec(-lam * v)}, X);
    EXPECT_EQ(c.causal, cp.causal);
    EXPECT_EQ(c.orientation, cp.orientation);
    EXPECT_EQ(c.causal, cn.causal);
    if (c.orientation == Orientation::future) EXPECT_EQ(cn.orientation, Orientation::past);
    if (c.orientation == Orientation::past) EXPECT_EQ(cn.orientation, Orientation::future);
  }
}

TEST(Christoffel, MinkowskiVanishes) {
  EXPECT_EQ(christoffel(*minkowski4(), pt({0.3, 1, 2, 3})).max_abs(), 0.0);
}

TEST(Christoffel, MilneTypeMetric) {
  auto g = make_expr_metric({"t", "x"}, {"-1", "0", "t^2"});
  TensorValue G = christoffel(*g, pt({2, 0.7}));
  EXPECT_NEAR(G({1, 0, 1}), 0.5, 1e-15);
  EXPECT_NEAR(G({1, 1, 0}), 0.5, 1e-15);
  EXPECT_NEAR(G({0, 1, 1}), 2.0, 1e-15);
  EXPECT_EQ(G({0, 0, 0}), 0.0);
  EXPECT_EQ(G({1, 1, 1}), 0.0);
  EXPECT_EQ(G({0, 0, 1}), 0.0);
  auto fd = oracle::christoffel(*g, pt({2, 0.7}));
  EXPECT_NEAR(fd[1](0, 1), 0.5, 1e-8);
  EXPECT_NEAR(fd[0](1, 1), 2.0, 1e-8);
}

TEST(Christoffel, SchwarzschildRadialAcceleration) {
  TensorValue G = christoffel(*schwarzschild(), pt({0, 4, 1.1, 0.2}));
  EXPECT_NEAR(G({1, 0, 0}), 1.0 / 32.0, 1e-15);
  auto fd = oracle::christoffel(*schwarzschild(), pt({0, 4, 1.1, 0.2}));
  EXPECT_NEAR(fd[1](0, 0), 1.0 / 32.0, 1e-9);
}

TEST(Christoffel, MatchesFiniteDifferences) {
  std::vector<std::pair<MetricFieldPtr, Point>> cases = {
      {schwarzschild(), pt({0.1, 3.7, 0.9, 2.0})},
      {eddington_finkelstein(), pt({0.3, 1.3, 1.9, 0.5})},
      {desitter(0.7), pt({0.4, 0.1, -0.3, 0.2})},
      {sphere(2.0), pt({1.0, 0.3})},
  };
  for (auto& [g, p] : cases) {
    TensorValue G = christoffel(*g, p);
    auto fd = oracle::christoffel(*g, p);
    const int n = g->dim();
    double scale = std::max(1.0, G.max_abs());
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) EXPECT_NEAR(G({k, i, j}), fd[k](i, j), 1e-5 * scale);
  }
}

TEST(Riemann, MinkowskiVanishes) { EXPECT_EQ(riemann(*minkowski4(), pt({1, 2, 3, 4})).max_abs(), 0.0); }

TEST(Riemann, RoundSphere) {
  for (double a : {1.0, 2.5}) {
    auto g = sphere(a);
    Point p = pt({pi / 2, 0.4});
    TensorValue R = riemann(*g, p);
    // Riem(∂θ, ∂φ, ∂φ, ∂θ) = K (g_θθ g_φφ) with K = 1/a²
    EXPECT_NEAR(R({0, 1, 1, 0}), a * a, 1e-12);
    EXPECT_NEAR(R({0, 1, 0, 1}), -a * a, 1e-12);
    auto fd = oracle::riemann(*g, p);
    EXPECT_NEAR(fd[(0 * 2 + 1) * 4 + 1 * 2 + 0], a * a, 1e-5);
    // sectional positivity for orthonormal pair
    LocalGeometry geo = local_geometry(*g, p);
    Vec v = unit_vec(2, 1) / a, w = unit_vec(2, 0) / a;
    EXPECT_NEAR(geo.riem(w, v, v, w), 1.0 / (a * a), 1e-12);
  }
}

TEST(Riemann, DeSitterNegativeOnTimelikePlanes) {
  double H = 0.8;
  auto g = desitter(H);
  Point p = pt({0.3, 0.1, 0.2, -0.4});
  LocalGeometry geo = local_geometry(*g, p);
  double e = std::exp(H * 0.3);
  Vec v = unit_vec(4, 0), w = unit_vec(4, 2) / e;
  EXPECT_NEAR(geo.riem(w, v, v, w), -H * H, 1e-12);
  // constant curvature identity for random pairs
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    Vec a(4), b(4);
    for (int k = 0; k < 4; ++k) a(k) = rng.uniform(-1, 1), b(k) = rng.uniform(-1, 1);
    const MetricValue& m = geo.metric();
    double expect = H * H * (m.inner(a, a) * m.inner(b, b) - std::pow(m.inner(a, b), 2));
    EXPECT_NEAR(geo.riem(a, b, b, a), expect, 1e-11);
  }
}

TEST(Riemann, MatchesFiniteDifferenceOracle) {
  auto g = schwarzschild();
  Point p = pt({0, 3.3, 1.2, 0.1});
  TensorValue R = riemann(*g, p);
  auto fd = oracle::riemann(*g, p);
  for (std::size_t i = 0; i < fd.size(); ++i) EXPECT_NEAR(R.components()[i], fd[i], 1e-5 * std::max(1.0, std::abs(fd[i])));
}

TEST(Ricci, Examples) {
  EXPECT_EQ(ricci(*minkowski4(), Point::Zero(4)).max_abs(), 0.0);
  EXPECT_LT(ricci(*schwarzschild(), pt({0, 4, 1.0, 0.5})).max_abs(), 1e-7);
  EXPECT_LT(ricci(*eddington_finkelstein(), pt({0, 1.5, 1.0, 0.5})).max_abs(), 1e-7);
  double H = 0.6;
  auto g = desitter(H);
  Point p = pt({0.5, 0, 0, 0});
  Mat ric = ricci(*g, p).as_matrix();
  EXPECT_LT((ric - 3 * H * H * g->value(p).g()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Riemann, CurvatureLikeSymmetries) {
  auto g = eddington_finkelstein();
  Rng rng(9);
  for (int s = 0; s < 20; ++s) {
    Point p = pt({rng.uniform(-1, 1), rng.uniform(0.5, 5), rng.uniform(0.3, 2.8), rng.uniform(0, 6)});
    LocalGeometry geo = local_geometry(*g, p);
    double scale = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) scale = std::max(scale, std::abs(geo.riem(i, j, k, l)));
    double tol = 1e-8 * std::max(scale, 1.0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            EXPECT_NEAR(geo.riem(i, j, k, l), -geo.riem(j, i, k, l), tol);
            EXPECT_NEAR(geo.riem(i, j, k, l), -geo.riem(i, j, l, k), tol);
            EXPECT_NEAR(geo.riem(i, j, k, l), geo.riem(k, l, i, j), tol);
            EXPECT_NEAR(geo.riem(i, j, k, l) + geo.riem(j, k, i, l) + geo.riem(k, i, j, l), 0.0, tol);
          }
  }
}

TEST(Tidal, MinkowskiIsZero) {
  auto t = tidal(*minkowski4(), {Point::Zero(4), unit_vec(4, 0)});
  EXPECT_EQ(t.matrix.rows(), 3);
  EXPECT_EQ(t.matrix.cwiseAbs().maxCoeff(), 0.0);
  auto tn = tidal(*minkowski4(), {Point::Zero(4), pt({1, 1, 0, 0})});
  EXPECT_TRUE(tn.null);
  EXPECT_EQ(tn.matrix.rows(), 2);
}

TEST(Tidal, StaticObserverInSchwarzschild) {
  auto g = schwarzschild();
  Point p = pt({0, 4, pi / 2, 0});
  auto t = tidal(*g, {p, unit_vec(4, 0)});
  ASSERT_EQ(t.eigenvalues.size(), 3);
  EXPECT_NEAR(t.eigenvalues(0), -1.0 / 32, 1e-12);
  EXPECT_NEAR(t.eigenvalues(1), 1.0 / 64, 1e-12);
  EXPECT_NEAR(t.eigenvalues(2), 1.0 / 64, 1e-12);
  EXPECT_LE((t.matrix - t.matrix.transpose()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Tidal, DeSitterTimelikeAndNull) {
  double H = 0.5;
  auto g = desitter(H);
  Point p = pt({0.2, 0, 0, 0});
  auto t = tidal(*g, {p, unit_vec(4, 0)});
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(t.eigenvalues(i), -H * H, 1e-12);
  double e = std::exp(H * 0.2);
  auto tn = tidal(*g, {p, pt({1, 1 / e, 0, 0})});
  EXPECT_LT(tn.matrix.cwiseAbs().maxCoeff(), 1e-12);
  // screen is orthonormal and orthogonal to v and ell
  const MetricValue m = g->value(p);
  EXPECT_NEAR(m.inner(tn.v, tn.ell), -1.0, 1e-12);
  for (const Vec& e1 : tn.screen) {
    EXPECT_NEAR(m.inner(e1, e1), 1.0, 1e-12);
    EXPECT_NEAR(m.inner(e1, tn.v), 0.0, 1e-12);
    EXPECT_NEAR(m.inner(e1, tn.ell), 0.0, 1e-12);
  }
}

TEST(Tidal, RejectsSpacelike) {
  EXPECT_THROW(tidal(*minkowski4(), {Point::Zero(4), unit_vec(4, 1)}), NotCausal);
  EXPECT_THROW(tidal(*minkowski4(), {Point::Zero(4), Vec::Zero(4)}), NotCausal);
}

TEST(Geodesic, MinkowskiStraightLine) {
  auto g = minkowski4();
  Point p = pt({0, 1, 2, 3});
  Vec v = pt({1, 0.3, -0.2, 0.5});
  auto sol = geodesic(*g, p, v, 2.0);
  for (std::size_t i = 0; i < sol.size(); ++i)
    EXPECT_LT((sol.points[i] - (p + sol.s[i] * v)).norm(), 1e-12);
  EXPECT_NEAR(sol.final_s(), 2.0, 1e-14);
  EXPECT_FALSE(sol.chart_exit);
}

TEST(Geodesic, SphereReachesAntipode) {
  for (double a : {1.0, 2.0}) {
    auto g = sphere(a);
    Point p = pt({pi / 2, 0.0});
    double tilt = 0.5;
    // unit speed: a² θ'² + a² φ'² = 1
    Vec v = pt({std::sin(tilt) / a, std::cos(tilt) / a});
    auto sol = geodesic(*g, p, v, pi * a);
    EXPECT_NEAR(sol.points.back()(0), pi / 2, 1e-6);
    EXPECT_NEAR(sol.points.back()(1), pi, 1e-6);
    EXPECT_LT(sol.max_norm_drift, 1e-8 * 2);
  }
}

TEST(Geodesic, PhotonSphereOrbit) {
  auto g = schwarzschild();
  Point p = pt({0, 3, pi / 2, 0});
  Vec v = pt({3 * std::sqrt(3.0), 0, 0, 1});
  auto sol = geodesic(*g, p, v, 2 * pi);
  double worst = 0;
  for (const auto& x : sol.points) worst = std::max(worst, std::abs(x(1) - 3));
  EXPECT_LT(worst, 1e-5);
  EXPECT_NEAR(sol.points.back()(3), 2 * pi, 1e-6);
}

TEST(Geodesic, ChartExitIsMarked) {
  auto g = schwarzschild();
  // radially infalling from r = 3: leaves r > 2M
  Point p = pt({0, 3, pi / 2, 0});
  Vec v = pt({1, -1, 0, 0});
  auto sol = geodesic(*g, p, v, 100.0);
  EXPECT_TRUE(sol.chart_exit);
  EXPECT_GT(sol.points.back()(1), 2.0);
}

TEST(Geodesic, DriftWithinTolerance) {
  auto g = eddington_finkelstein();
  Point p = pt({0, 4, 1.0, 0.3});
  Vec v = pt({1, 0.1, 0.05, 0.02});
  auto sol = geodesic(*g, p, v, 5.0);
  EXPECT_LT(sol.max_norm_drift, 1e-8 * (1 + std::abs(sol.initial_norm)));
}

TEST(ParallelTransport, MinkowskiConstant) {
  auto g = minkowski4();
  auto sol = geodesic(*g, Point::Zero(4), pt({1, 0.5, 0, 0}), 3.0);
  Vec w = pt({0.2, 1, -1, 3});
  for (const Vec& x : parallel_transport(*g, sol, w)) EXPECT_LT((x - w).norm(), 1e-14);
}

TEST(ParallelTransport, ConservesInnerProducts) {
  auto g = schwarzschild();
  Point p = pt({0, 6, 1.2, 0.1});
  Vec v = pt({1.2, -0.3, 0.05, 0.04});
  auto sol = geodesic(*g, p, v, 4.0);
  std::vector<Vec> frame = {pt({0, 1, 0, 0}), pt({0, 0, 1, 0}), pt({0.1, 0, 0, 1})};
  auto tr = parallel_transport(*g, sol, frame);
  MetricValue m0 = g->value(p);
  for (std::size_t i = 0; i < sol.size(); ++i) {
    MetricValue m = g->value(sol.points[i]);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b)
        EXPECT_NEAR(m.inner(tr[i][a], tr[i][b]), m0.inner(frame[a], frame[b]), 1e-7);
      EXPECT_NEAR(m.inner(tr[i][a], sol.velocities[i]), m0.inner(frame[a], v), 1e-7);
    }
  }
}

namespace {

// unit sphere chart helpers
Vec to_r3(const Point& q) {
  Vec x(3);
  x << std::sin(q(0)) * std::cos(q(1)), std::sin(q(0)) * std::sin(q(1)), std::cos(q(0));
  return x;
}

Point from_r3(const Vec& x) { return pt({std::acos(x(2)), std::atan2(x(1), x(0))}); }

Mat chart_jacobian(const Point& q) {  // d(x,y,z)/d(θ,φ)
  Mat J(3, 2);
  J << std::cos(q(0)) * std::cos(q(1)), -std::sin(q(0)) * std::sin(q(1)), std::cos(q(0)) * std::sin(q(1)),
      std::sin(q(0)) * std::cos(q(1)), -std::sin(q(0)), 0;
  return J;
}

Vec to_chart(const Point& q, const Vec& t) {
  Mat J = chart_jacobian(q);
  return (J.transpose() * J).ldlt().solve(J.transpose() * t);
}

}  // namespace

TEST(ParallelTransport, SphereTriangleHolonomy) {
  auto g = sphere(1.0);
  // rotated octant so that no vertex is near a pole
  Eigen::Matrix3d R = (Eigen::AngleAxisd(0.4, Eigen::Vector3d::UnitX()) *
                       Eigen::AngleAxisd(0.7, Eigen::Vector3d::UnitY()) *
                       Eigen::AngleAxisd(0.3, Eigen::Vector3d::UnitZ()))
                          .toRotationMatrix();
  std::vector<Vec> V = {Vec(R.col(0)), Vec(R.col(1)), Vec(R.col(2))};
  Point q0 = from_r3(V[0]);
  Vec w0 = to_chart(q0, V[2]);
  Vec w = w0;
  for (int e = 0; e < 3; ++e) {
    Point q = from_r3(V[e]);
    Vec vel = to_chart(q, V[(e + 1) % 3]);
    auto sol = geodesic(*g, q, vel, pi / 2);
    w = parallel_transport(*g, sol, w).back();
    Point end = sol.points.back();
    EXPECT_LT((to_r3(end) - V[(e + 1) % 3]).norm(), 1e-7);
    // re-express at the exact vertex (chart φ may differ by 2π)
    w = to_chart(from_r3(V[(e + 1) % 3]), chart_jacobian(end) * w);
  }
  MetricValue m = g->value(q0);
  double c = m.inner(w, w0) / std::sqrt(m.inner(w, w) * m.inner(w0, w0));
  EXPECT_NEAR(std::acos(std::clamp(c, -1.0, 1.0)), pi / 2, 1e-6);
}

TEST(NormalChart, MinkowskiIdentity) {
  auto g = minkowski4();
  Point p = pt({0.5, 1, 2, 3});
  auto chart = normal_chart(g, p, Mat::Identity(4, 4));
  Vec x = pt({0.1, -0.2, 0.3, 0.05});
  EXPECT_LT((chart.forward(x) - (p + x)).norm(), 1e-12);
  EXPECT_LT((chart.inverse(p + x) - x).norm(), 1e-12);
}

TEST(NormalChart, SchwarzschildFlatAtCenter) {
  auto g = schwarzschild();
  Point p = pt({0, 6, pi / 2, 0});
  Mat E = orthonormal_frame(g->value(p));
  auto chart = normal_chart(g, p, E);
  MetricValue gt = chart.pulled_metric(Vec::Zero(4));
  Mat eta = Mat::Identity(4, 4);
  eta(0, 0) = -1;
  EXPECT_LT((gt.g() - eta).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(chart.pulled_christoffel(Vec::Zero(4)).max_abs(), 1e-6);
}

TEST(NormalChart, SphereDeterminant) {
  for (double a : {1.0, 2.0}) {
    auto g = sphere(a);
    Point p = pt({pi / 2, 0.2});
    Mat E(2, 2);
    E << 1 / a, 0, 0, 1 / a;
    auto chart = normal_chart(g, p, E, 0.8);
    for (double rho : {0.2, 0.5}) {
      Vec x = pt({rho * std::cos(0.3), rho * std::sin(0.3)});
      double det = chart.pulled_metric(x).g().determinant();
      double expect = std::pow(a * std::sin(rho / a) / rho, 2);
      EXPECT_NEAR(det, expect, 1e-5);
    }
  }
}

TEST(NormalChart, RejectsBadFrame) {
  EXPECT_THROW(normal_chart(minkowski4(), Point::Zero(4), 2 * Mat::Identity(4, 4)), FrameNotOrthonormal);
}

TEST(NormalChart, QuadraticCoordinatesHaveExactTwoJet) {
  auto g = schwarzschild();
  Point p = pt({0, 6, pi / 2, 0});
  auto chart = normal_chart(g, p, orthonormal_frame(g->value(p)));
  // pulling the flat quadratic chart back gives Christoffels of the metric at p
  auto jets = chart.quadratic_coordinates(p);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(jets[i].value, 0.0, 1e-15);
  // compare to inverse of the exact chart at a nearby point: error is third order
  Point y = p + pt({0.01, 0.01, 0.003, 0.002});
  Vec exact = chart.inverse(y);
  auto q = chart.quadratic_coordinates(y);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(q[i].value, exact(i), 1e-5);
}

TEST(GenericCondition, FlatNotDetectedCurvedSatisfied) {
  auto flat = geodesic(*minkowski4(), Point::Zero(4), unit_vec(4, 0), 1.0);
  EXPECT_FALSE(generic_check(*minkowski4(), flat).satisfied);
  auto ds = desitter(1.0);
  auto sol = geodesic(*ds, Point::Zero(4), unit_vec(4, 0), 1.0);
  auto r = generic_check(*ds, sol);
  EXPECT_TRUE(r.satisfied);
  EXPECT_EQ(r.s_star, 0.0);
}
