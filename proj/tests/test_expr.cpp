#include <gtest/gtest.h>

#include <cmath>

#include "lorentz/errors.hpp"
#include "lorentz/expr.hpp"
#include "lorentz/random.hpp"

using namespace lorentz;

TEST(Parse, PrefixForm) {
  SymbolTable s({"t", "r"});
  EXPECT_EQ(to_string(parse("exp(2*t) - r^2", s)), "Sub(Exp(Mul(2,t)),Pow(r,2))");
}

TEST(Parse, Precedence) {
  SymbolTable s({"a", "b", "c"});
  EXPECT_EQ(to_string(parse("a - b - c", s)), "Sub(Sub(a,b),c)");
  EXPECT_EQ(to_string(parse("a ^ b ^ c", s)), "Pow(a,Pow(b,c))");
  EXPECT_EQ(to_string(parse("-a^2", s)), "Neg(Pow(a,2))");
  EXPECT_EQ(to_string(parse("a*b/c", s)), "Div(Mul(a,b),c)");
}

TEST(Parse, MalformedPowerReportsOffset) {
  SymbolTable s({"x"});
  try {
    parse("x^^2", s);
    FAIL() << "no error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 2u);
  }
}

TEST(Parse, UnknownSymbol) {
  SymbolTable s({"t", "r"});
  try {
    parse("sin(q)", s);
    FAIL() << "no error";
  } catch (const UnknownSymbol& e) {
    EXPECT_EQ(e.name(), "q");
  }
}

TEST(Parse, AbsIsNotAFunction) {
  SymbolTable s({"x"});
  EXPECT_THROW(parse("abs(x)", s), Error);
}

TEST(Eval2, SinTimesX) {
  SymbolTable s({"x"});
  Expr e = parse("sin(x)*x", s);
  Jet2 j = eval2(e, Vec::Zero(1));
  EXPECT_DOUBLE_EQ(j.value, 0.0);
  EXPECT_DOUBLE_EQ(j.gradient(0), 0.0);
  EXPECT_DOUBLE_EQ(j.hessian(0, 0), 2.0);
}

TEST(Eval2, Monomial) {
  SymbolTable s({"x", "y"});
  Vec p(2);
  p << 2, 3;
  Jet2 j = eval2(parse("x^2*y", s), p);
  EXPECT_DOUBLE_EQ(j.value, 12);
  EXPECT_DOUBLE_EQ(j.gradient(0), 12);
  EXPECT_DOUBLE_EQ(j.gradient(1), 4);
  EXPECT_DOUBLE_EQ(j.hessian(0, 0), 6);
  EXPECT_DOUBLE_EQ(j.hessian(0, 1), 4);
  EXPECT_DOUBLE_EQ(j.hessian(1, 0), 4);
  EXPECT_DOUBLE_EQ(j.hessian(1, 1), 0);
}

TEST(Eval2, ExponentialOfFirstCoordinate) {
  SymbolTable s({"x0", "x1", "x2", "x3"});
  Jet2 j = eval2(parse("exp(x1)", s), Vec::Zero(4));
  EXPECT_DOUBLE_EQ(j.value, 1.0);
  EXPECT_EQ(j.gradient, unit_vec(4, 1));
  Mat E = Mat::Zero(4, 4);
  E(1, 1) = 1;
  EXPECT_EQ(j.hessian, E);
}

TEST(Eval2, DomainErrors) {
  SymbolTable s({"x"});
  Vec p = Vec::Zero(1);
  EXPECT_THROW(eval2(parse("log(x)", s), p), DomainError);
  EXPECT_THROW(eval2(parse("sqrt(x - 1)", s), p), DomainError);
  EXPECT_THROW(eval2(parse("1/x", s), p), DomainError);
  EXPECT_THROW(eval2(parse("x^0.5", s), p), DomainError);
}

TEST(Eval2, ParametersAreConstants) {
  SymbolTable s({"r"}, {"M"});
  Vec p(1);
  p << 4;
  std::vector<double> params = s.bind({{"M", 1.0}});
  Jet2 j = eval2(parse("1 - 2*M/r", s), p, params);
  EXPECT_DOUBLE_EQ(j.value, 0.5);
  EXPECT_DOUBLE_EQ(j.gradient(0), 2.0 / 16);
  EXPECT_THROW(s.bind({}), ParamError);
}

namespace {

std::string random_polynomial(Rng& rng, int vars) {
  std::string out;
  int terms = 3 + static_cast<int>(rng.uniform() * 4);
  for (int t = 0; t < terms; ++t) {
    double c = rng.uniform(-2, 2);
    out += (t ? " + " : "") + std::string("(") + std::to_string(c) + ")";
    int deg = static_cast<int>(rng.uniform() * 5);
    for (int d = 0; d < deg; ++d) out += "*x" + std::to_string(static_cast<int>(rng.uniform() * vars));
  }
  return out;
}

}  // namespace

TEST(Eval2, PolynomialsMatchFiniteDifferences) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + static_cast<int>(rng.uniform() * 4);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
    SymbolTable s(names);
    Expr e = parse(random_polynomial(rng, n), s);
    Vec p(n);
    for (int i = 0; i < n; ++i) p(i) = rng.uniform(-1, 1);
    Jet2 j = eval2(e, p);
    const double h = 1e-4;
    auto f = [&](const Vec& q) { return eval(e, std::span<const double>(q.data(), q.size())); };
    for (int a = 0; a < n; ++a) {
      Vec ea = unit_vec(n, a) * h;
      double fd = (f(p + ea) - f(p - ea)) / (2 * h);
      EXPECT_NEAR(j.gradient(a), fd, 1e-6 * std::max(1.0, std::abs(fd)));
      for (int b = 0; b < n; ++b) {
        Vec eb = unit_vec(n, b) * h;
        double fd2 = (f(p + ea + eb) - f(p + ea - eb) - f(p - ea + eb) + f(p - ea - eb)) / (4 * h * h);
        EXPECT_NEAR(j.hessian(a, b), fd2, 1e-6 * std::max(1.0, std::abs(fd2)) + 1e-6);
      }
    }
  }
}

TEST(Eval2, ChainRuleMatchesComposition) {
  // exp(sin(x*y)) evaluated directly vs composed jets
  SymbolTable s({"x", "y"});
  Expr direct = parse("exp(sin(x*y))", s);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    Vec p(2);
    p << rng.uniform(-2, 2), rng.uniform(-2, 2);
    Jet2 a = eval2(direct, p);
    Jet2 inner = Jet2::variable(2, 0, p(0)) * Jet2::variable(2, 1, p(1));
    Jet2 b = exp(sin(inner));
    EXPECT_NEAR(a.value, b.value, 1e-12);
    EXPECT_LE((a.gradient - b.gradient).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((a.hessian - b.hessian).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Jet, HessianIsSymmetric) {
  SymbolTable s({"x", "y", "z"});
  Vec p(3);
  p << 0.3, -0.7, 1.1;
  Jet2 j = eval2(parse("tanh(x*y)^3 / cosh(z) + sqrt(x^2 + 2) * (y^2 + 1)^z", s), p);
  EXPECT_EQ(j.hessian, j.hessian.transpose());
}
