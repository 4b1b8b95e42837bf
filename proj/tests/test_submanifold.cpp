#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lorentz/catalog.hpp"
#include "lorentz/conformal.hpp"
#include "lorentz/errors.hpp"
#include "lorentz/submanifold.hpp"
#include "oracle.hpp"

using namespace lorentz;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST(Embedding, GridOrderAndPeriodicDefaults) {
  const Embedding e = make_embedding("e", {"a", "b"}, {"0", "a", "b", "0"}, {}, {std::nullopt, 1.0},
                                     Box{{0, 0}, {2, 1}}, {2, 3});
  const auto pts = e.grid_points();
  ASSERT_EQ(pts.size(), 6u);
  // Cell centred, last parameter fastest.
  EXPECT_DOUBLE_EQ(pts[0](0), 0.5);
  EXPECT_DOUBLE_EQ(pts[0](1), 1.0 / 6);
  EXPECT_DOUBLE_EQ(pts[1](1), 0.5);
  EXPECT_DOUBLE_EQ(pts[3](0), 1.5);
  EXPECT_FALSE(e.closed());
  EXPECT_THROW(make_embedding("bad", {"a"}, {"0", "a"}, {}, {std::nullopt}, std::nullopt, {4}), DomainError);
}

TEST(Embedding, InducedAndDegenerate) {
  const Spacetime mk = load("minkowski");
  const Embedding e = make_embedding("e", {"a", "b"}, {"0", "a", "a", "b"}, {}, {std::nullopt, std::nullopt},
                                     Box{{-1, -1}, {1, 1}}, {2, 2});
  const InducedMetric im = induced(*mk.metric, e, v2(0.1, 0.2));
  EXPECT_TRUE(im.spacelike);
  EXPECT_NEAR(im.metric(0, 0), 2.0, 1e-15);
  const Embedding deg = make_embedding("d", {"a", "b"}, {"0", "a+b", "a+b", "0"}, {}, {std::nullopt, std::nullopt},
                                       Box{{-1, -1}, {1, 1}}, {2, 2});
  EXPECT_THROW(induced(*mk.metric, deg, v2(0, 0)), DegenerateEmbedding);
  const Embedding nul = make_embedding("n", {"s", "z"}, {"s", "0", "s", "z"}, {}, {std::nullopt, std::nullopt},
                                       Box{{-1, -1}, {1, 1}}, {2, 2});
  EXPECT_FALSE(induced(*mk.metric, nul, v2(0, 0)).spacelike);
  EXPECT_THROW(shape(*mk.metric, nul, v2(0, 0)), NotSpacelike);
}

TEST(MeanCurvature, MinkowskiSphereClosedForm) {
  const Spacetime mk = load("minkowski", {{"R", 2.0}});
  const Embedding& s = mk.submanifold("sphere");
  const Vec u = v2(1.1, 0.7);
  const MeanCurvature mc = mean_curv(*mk.metric, *mk.orientation, s, u);
  const Point x = s.point(u);
  // H = -(2/R) times the outward unit radial vector.
  Vec want = -(2.0 / 2.0) * x / 2.0;
  EXPECT_LT((mc.H - want).norm(), 1e-12);
  EXPECT_NEAR(mc.g_HH, 1.0, 1e-12);
  EXPECT_EQ(mc.causal.causal, Causal::spacelike);
  EXPECT_LT(mc.orthogonality_defect, 1e-12);
}

TEST(MeanCurvature, AgreesWithDifferenceOracle) {
  const Spacetime ef = load("schwarzschild_ef");
  const Embedding e =
      make_embedding("wavy", {"a", "b"}, {"0.3*sin(a)", "3 + 0.2*cos(b) + 0.1*a", "a", "b"}, {},
                     {std::nullopt, 2 * std::numbers::pi}, Box{{0.5, 0}, {2.5, 2 * std::numbers::pi}}, {3, 3});
  for (const Vec& u : e.grid_points()) {
    const MeanCurvature mc = mean_curv(*ef.metric, *ef.orientation, e, u);
    const Vec fd = oracle::mean_curvature(*ef.metric, [&](const Vec& w) { return e.point(w); }, u);
    EXPECT_LT((mc.H - fd).norm(), 1e-5 * std::max(1.0, fd.norm())) << u.transpose();
  }
}

TEST(MeanCurvature, ReparametrizationInvariant) {
  const Spacetime ef = load("schwarzschild_ef");
  const Embedding& s = ef.submanifold("outer");
  Mat A(2, 2);
  A << 1.0, 0.3, -0.2, 0.8;
  const Embedding r = s.reparametrized(A);
  const Vec u = v2(0.9, 1.4);
  const Vec w = A.inverse() * u;  // r(w) = s(A w) = s(u)
  EXPECT_LT((r.point(w) - s.point(u)).norm(), 1e-14);
  const Vec H1 = mean_curv(*ef.metric, *ef.orientation, s, u).H;
  const Vec H2 = mean_curv(*ef.metric, *ef.orientation, r, w).H;
  EXPECT_LT((H1 - H2).norm(), 1e-12);
}

TEST(MeanCurvature, ContinuityUnderConstantRescaling) {
  const Spacetime ef = load("schwarzschild_ef");
  const Embedding& s = ef.submanifold("outer");
  const Vec u = v2(1.0, 0.2);
  const Vec H = mean_curv(*ef.metric, *ef.orientation, s, u).H;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const auto ge = rescale(ef.metric, std::make_shared<ConstantScalarField>(4, 0.5 * std::log1p(eps)));
    const Vec He = mean_curv(*ge, *ef.orientation, s, u).H;
    // Ĥ = H / (1 + ε) exactly, so the ratio is |H|/(1+ε).
    EXPECT_NEAR((He - H).norm() / eps, H.norm() / (1 + eps), 1e-8);
  }
}

TEST(NullData, EddingtonFinkelsteinSpheres) {
  const Spacetime ef = load("schwarzschild_ef", {{"M", 1}});
  const Vec u = v2(1.3, 2.0);
  const auto nd = [&](const char* name) {
    const Embedding& s = ef.submanifold(name);
    return null_data(*ef.metric, *ef.orientation, s, u, s.hint().get());
  };
  EXPECT_GT(nd("outer").theta_plus, 0.0);
  EXPECT_LT(nd("outer").theta_minus, 0.0);
  EXPECT_LT(std::abs(nd("horizon").theta_plus), 1e-7);
  EXPECT_LT(nd("horizon").theta_minus, 0.0);
  EXPECT_LT(nd("inner").theta_plus, 0.0);
  EXPECT_LT(nd("inner").theta_minus, 0.0);

  const NullData d = nd("outer");
  const Point x = ef.submanifold("outer").point(u);
  const Mat G = ef.metric->value(x).g();
  EXPECT_NEAR(d.K_plus.dot(G * d.K_minus), -1.0, 1e-12);
  EXPECT_NEAR(d.K_plus.dot(G * d.K_plus), 0.0, 1e-12);
  EXPECT_GT(d.K_plus(1), 0.0);  // outgoing
  // θ± = -g(H, K±)
  const Vec H = mean_curv(*ef.metric, *ef.orientation, ef.submanifold("outer"), u).H;
  EXPECT_NEAR(d.theta_plus, -H.dot(G * d.K_plus), 1e-12);
}

TEST(NullData, Errors) {
  const Spacetime mk = load("minkowski");
  const Embedding& s = mk.submanifold("sphere");
  const ConstantVectorField dt(unit_vec(4, 0));
  EXPECT_THROW(null_data(*mk.metric, *mk.orientation, s, v2(1, 1), &dt), OrientationHintDegenerate);
  // No hint argument falls back to the embedding's own hint; the demo surface has none.
  EXPECT_NO_THROW(null_data(*mk.metric, *mk.orientation, s, v2(1, 1), nullptr));
  const Spacetime d = load("null_H_demo");
  EXPECT_THROW(null_data(*d.metric, *d.orientation, d.submanifold("surface"), v2(0, 0), nullptr),
               OrientationHintDegenerate);
  const Spacetime t = load("torus_quotient");
  Vec u = Vec::Constant(3, 0.5);
  EXPECT_THROW(null_data(*t.metric, *t.orientation, t.submanifold("Pi"), u, nullptr), WrongCodimension);
}

TEST(Classify, TorusAndDemo) {
  const Spacetime t = load("torus_quotient");
  const TrappedVerdict pi = classify(*t.metric, *t.orientation, t.submanifold("Pi"));
  EXPECT_EQ(pi.cls, TrappedClass::weakly_future_trapped);
  EXPECT_EQ(pi.subtype, TrappedSubtype::extremal);
  EXPECT_TRUE(t.submanifold("Pi").closed());
  EXPECT_EQ(pi.records.size(), 64u);
  EXPECT_TRUE(pi.witness_not_trapped.has_value());
  EXPECT_EQ(*pi.witness_not_trapped, 0u);
  EXPECT_FALSE(pi.witness_not_weak.has_value());
  for (const auto& r : pi.records) EXPECT_FALSE(r.theta_plus.has_value());

  const Spacetime d = load("null_H_demo");
  const TrappedVerdict v = classify(*d.metric, *d.orientation, d.submanifold("surface"));
  EXPECT_EQ(v.cls, TrappedClass::weakly_future_trapped);
  EXPECT_EQ(v.subtype, TrappedSubtype::null_h);
  for (const auto& r : v.records) {
    EXPECT_EQ(r.h_causal, Causal::null);
    EXPECT_EQ(r.h_orientation, Orientation::past);
  }
}

TEST(Classify, EddingtonFinkelstein) {
  const Spacetime ef = load("schwarzschild_ef");
  const TrappedVerdict outer = classify(*ef.metric, *ef.orientation, ef.submanifold("outer"));
  EXPECT_EQ(outer.cls, TrappedClass::not_weakly_trapped);
  ASSERT_TRUE(outer.witness_not_weak);
  EXPECT_EQ(*outer.witness_not_weak, 0u);
  const TrappedVerdict hor = classify(*ef.metric, *ef.orientation, ef.submanifold("horizon"), {}, 3);
  EXPECT_EQ(hor.cls, TrappedClass::weakly_future_trapped);
  EXPECT_EQ(hor.subtype, TrappedSubtype::mots);
  for (const auto& r : hor.records) {
    ASSERT_TRUE(r.theta_plus);
    EXPECT_LT(std::abs(*r.theta_plus), 1e-7);
  }
  const TrappedVerdict inner = classify(*ef.metric, *ef.orientation, ef.submanifold("inner"));
  EXPECT_EQ(inner.cls, TrappedClass::future_trapped);
  EXPECT_GT(inner.margin, 1e-9);
  for (const auto& r : inner.records) {
    EXPECT_LT(*r.theta_plus, 0.0);
    EXPECT_LT(*r.theta_minus, 0.0);
    EXPECT_EQ(r.h_causal, Causal::timelike);
    EXPECT_EQ(r.h_orientation, Orientation::past);
  }
}

TEST(Classify, JobsDoNotChangeResult) {
  const Spacetime ef = load("schwarzschild_ef");
  const auto a = classify(*ef.metric, *ef.orientation, ef.submanifold("inner"), {}, 1);
  const auto b = classify(*ef.metric, *ef.orientation, ef.submanifold("inner"), {}, 4);
  ASSERT_EQ(a.records.size(), b.records.size());
  EXPECT_EQ(a.margin, b.margin);
  for (std::size_t i = 0; i < a.records.size(); ++i) EXPECT_EQ(a.records[i].g_HH, b.records[i].g_HH);
}
