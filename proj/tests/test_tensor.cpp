#include <gtest/gtest.h>

#include "lorentz/errors.hpp"
#include "lorentz/geometry.hpp"
#include "lorentz/random.hpp"
#include "lorentz/tensor.hpp"

using namespace lorentz;

namespace {

Mat eta(int n) {
  Mat m = Mat::Identity(n, n);
  m(0, 0) = -1;
  return m;
}

TensorValue random_tensor(Rng& rng, int n, std::vector<Variance> var) {
  TensorValue t(n, var);
  for (double& c : t.components()) c = rng.uniform(-1, 1);
  return t;
}

}  // namespace

TEST(MoveIndex, LowerTimeVectorInMinkowski) {
  MetricValue m(eta(4));
  TensorValue v = TensorValue::vector(unit_vec(4, 0));
  TensorValue low = move_index(m, v, 0, IndexMove::lower);
  EXPECT_EQ(low.variance()[0], Variance::lower);
  EXPECT_DOUBLE_EQ(low({0}), -1.0);
  EXPECT_DOUBLE_EQ(low({1}), 0.0);
}

TEST(MoveIndex, SchwarzschildTimeComponent) {
  auto g = make_expr_metric({"t", "r", "th", "ph"},
                            {"-(1 - 2*M/r)", "0", "1/(1 - 2*M/r)", "0", "0", "r^2", "0", "0", "0",
                             "r^2*sin(th)^2"},
                            {{"M", 1.0}});
  Point p(4);
  p << 0, 4, 1.0, 0.3;
  TensorValue low = move_index(g->value(p), TensorValue::vector(unit_vec(4, 0)), 0, IndexMove::lower);
  EXPECT_NEAR(low({0}), -0.5, 1e-15);
}

TEST(MoveIndex, RaiseLowerIsInvolution) {
  Rng rng(11);
  Mat A(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) A(i, j) = rng.uniform(-0.2, 0.2);
  Mat g = eta(4) + A + A.transpose();
  MetricValue m(g);
  TensorValue t = random_tensor(rng, 4, {Variance::upper, Variance::lower, Variance::upper});
  for (int slot : {0, 2}) {
    TensorValue back = move_index(m, move_index(m, t, slot, IndexMove::lower), slot, IndexMove::raise);
    EXPECT_LE((back + t * -1.0).max_abs(), 1e-12);
  }
  TensorValue back = move_index(m, move_index(m, t, 1, IndexMove::raise), 1, IndexMove::lower);
  EXPECT_LE((back + t * -1.0).max_abs(), 1e-12);
}

TEST(MoveIndex, SlotErrors) {
  MetricValue m(eta(3));
  TensorValue v = TensorValue::vector(unit_vec(3, 0));
  EXPECT_THROW(move_index(m, v, 1, IndexMove::lower), SlotError);
  EXPECT_THROW(move_index(m, v, 0, IndexMove::raise), SlotError);
}

TEST(Contract, IdentityTrace) {
  TensorValue id = TensorValue::matrix(Mat::Identity(4, 4), Variance::upper, Variance::lower);
  EXPECT_DOUBLE_EQ(contract(id, 0, 1).components()[0], 4.0);
}

TEST(Contract, VarianceMismatch) {
  TensorValue t = TensorValue::matrix(Mat::Identity(3, 3), Variance::lower, Variance::lower);
  EXPECT_THROW(contract(t, 0, 1), SlotError);
  EXPECT_THROW(contract(t, 0, 5), SlotError);
}

TEST(Contract, FlatRiemannGivesZeroRicci) {
  auto g = make_expr_metric({"t", "x", "y", "z"}, {"-1", "0", "1", "0", "0", "1", "0", "0", "0", "1"});
  Point p = Point::Zero(4);
  TensorValue R = riemann(*g, p);
  TensorValue up = move_index(g->value(p), R, 3, IndexMove::raise);
  // R(∂i,∂j)∂k has components up(i,j,k,m); the trace over i and m is Ricci(j,k)
  TensorValue ric = contract(up, 3, 0);
  EXPECT_EQ(ric.rank(), 2);
  EXPECT_DOUBLE_EQ(ric.max_abs(), 0.0);
}

TEST(Contract, RandomTraceIsDiagonalSum) {
  Rng rng(5);
  TensorValue t = random_tensor(rng, 5, {Variance::upper, Variance::lower});
  double s = 0;
  for (int i = 0; i < 5; ++i) s += t({i, i});
  EXPECT_NEAR(contract(t, 0, 1).components()[0], s, 1e-12);
}

TEST(Contract, IsLinear) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    TensorValue T = random_tensor(rng, 4, {Variance::upper, Variance::lower, Variance::lower});
    TensorValue S = random_tensor(rng, 4, {Variance::upper, Variance::lower, Variance::lower});
    double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    TensorValue lhs = contract(T * a + S * b, 0, 2);
    TensorValue rhs = contract(T, 0, 2) * a + contract(S, 0, 2) * b;
    EXPECT_LE((lhs + rhs * -1.0).max_abs(), 1e-12);
  }
}

TEST(MetricValue, RejectsSingularAndAsymmetric) {
  Mat g = Mat::Zero(2, 2);
  g(0, 0) = -1;
  EXPECT_THROW(MetricValue{g}, SingularMetric);
  Mat a = eta(2);
  a(0, 1) = 0.5;
  EXPECT_THROW(MetricValue{a}, SingularMetric);
}

TEST(MetricValue, InverseAndIndex) {
  Mat g = eta(4);
  g(0, 1) = g(1, 0) = 0.3;
  MetricValue m(g);
  EXPECT_LE((m.g() * m.inverse() - Mat::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(m.index(), 1);
  EXPECT_TRUE(m.lorentzian());
}
