#include <gtest/gtest.h>

#include <cmath>

#include "lorentz/errors.hpp"
#include "lorentz/geometry.hpp"
#include "lorentz/spacetime_file.hpp"
#include "lorentz/submanifold.hpp"

using namespace lorentz;

namespace {

const char* kRindler = R"(# Rindler wedge
name rindler
dimension 3
coordinates t x y
params a = 2
domain x 0 inf
metric
  -(a*x)^2,
  0, 1,
  0, 0, 1
end
orientation 1, 0, 0
temporal t
region near t -1 1 x 0.5 2 y -1 1
submanifold line
  parameters s
  range s -1 1
  grid 5
  map 0, 1, s
  hint 0, 1, 0
end
)";

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto k = s.find(from);
  EXPECT_NE(k, std::string::npos) << from;
  return s.replace(k, from.size(), to);
}

// Expect a FormatError mentioning the given line.
void expect_line(const std::string& text, int line) {
  try {
    parse_spacetime(text, {}, "doc");
    FAIL() << "no error";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("doc:" + std::to_string(line) + ":"), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(SpacetimeFile, RindlerIsFlatAndParsedFaithfully) {
  const Spacetime st = parse_spacetime(kRindler);
  EXPECT_EQ(st.name, "rindler");
  ASSERT_EQ(st.metric->dim(), 3);
  EXPECT_EQ(st.params.at("a"), 2.0);
  const Point p = v3(0.3, 1.2, -0.4);
  const LocalGeometry geo = local_geometry(*st.metric, p);
  EXPECT_NEAR(geo.metric().g()(0, 0), -4 * 1.44, 1e-14);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) EXPECT_NEAR(geo.riem(i, j, k, l), 0.0, 1e-10);
  // Gamma^t_tx = 1/x, Gamma^x_tt = a^2 x
  EXPECT_NEAR(geo.gamma(0, 0, 1), 1 / 1.2, 1e-10);
  EXPECT_NEAR(geo.gamma(1, 0, 0), 4 * 1.2, 1e-10);
  EXPECT_FALSE(st.metric->in_domain(v3(0, -1, 0)));
  const Region r = st.region("near");
  ASSERT_TRUE(r.box);
  EXPECT_EQ(r.box->lo[1], 0.5);
  EXPECT_EQ(r.box->hi[1], 2.0);
  EXPECT_TRUE(st.region("default").box);
}

TEST(SpacetimeFile, SubmanifoldBlock) {
  const Spacetime st = parse_spacetime(kRindler);
  const Embedding& e = st.submanifold("line");
  EXPECT_EQ(e.param_dim(), 1);
  EXPECT_EQ(e.codim(), 2);
  const TrappedVerdict v = classify(*st.metric, *st.orientation, e);
  EXPECT_EQ(v.records.size(), 5u);
  // a straight line in a static slice is totally geodesic in flat space
  EXPECT_EQ(v.subtype, TrappedSubtype::extremal);
}

TEST(SpacetimeFile, ParamOverride) {
  const Spacetime st = parse_spacetime(kRindler, {{"a", 3}});
  EXPECT_NEAR(local_geometry(*st.metric, v3(0, 1, 0)).metric().g()(0, 0), -9, 1e-14);
}

TEST(SpacetimeFile, TrailingSeparatorsAndSingleLineMetric) {
  const std::string one = replace(kRindler, "  -(a*x)^2,\n  0, 1,\n  0, 0, 1\n", "  -(a*x)^2, 0, 1, 0, 0, 1\n");
  EXPECT_NO_THROW(parse_spacetime(one));
}

TEST(SpacetimeFile, MetricEntryCountIsChecked) {
  expect_line(replace(kRindler, "  0, 0, 1\n", "  0, 0\n"), 7);
  expect_line(replace(kRindler, "  0, 0, 1\n", "  0, 0, 1, 0\n"), 7);
}

TEST(SpacetimeFile, ErrorsCarryLineNumbers) {
  expect_line(replace(kRindler, "  0, 1,\n", "  0, 1 +,\n"), 9);    // syntax
  expect_line(replace(kRindler, "  0, 0, 1\n", "  0, 0, q\n"), 10);  // unknown symbol
  expect_line(replace(kRindler, "temporal t", "temporal"), 13);
  expect_line(replace(kRindler, "orientation 1, 0, 0", "orientation 1, 0"), 12);
  expect_line(replace(kRindler, "dimension 3", "dimension 9"), 3);
  expect_line(replace(kRindler, "name rindler", "colour blue"), 2);
  expect_line(replace(kRindler, "  grid 5", "  grid 2.5"), 18);
  expect_line(replace(kRindler, "  map 0, 1, s", "  map 0, 1"), 15);
  expect_line(replace(kRindler, "end\norientation", "orientation"), 7);
}

TEST(SpacetimeFile, RejectsNonLorentzianAndSpacelikeOrientation) {
  EXPECT_THROW(parse_spacetime(replace(kRindler, "-(a*x)^2", "(a*x)^2")), FormatError);
  EXPECT_THROW(parse_spacetime(replace(kRindler, "orientation 1, 0, 0", "orientation 0, 1, 0")), FormatError);
}

TEST(SpacetimeFile, BuiltinStanza) {
  const Spacetime st = parse_spacetime("# comment\nbuiltin: schwarzschild_static\nparams M = 2\n");
  EXPECT_EQ(st.name, "schwarzschild_static");
  EXPECT_EQ(st.params.at("M"), 2.0);
  EXPECT_THROW(parse_spacetime("builtin: nowhere\n"), UnknownSpacetime);
  EXPECT_THROW(parse_spacetime("builtin: minkowski\nparams n = 7\n"), ParamError);
  EXPECT_THROW(parse_spacetime("builtin: minkowski\ndimension 3\n"), FormatError);
}

TEST(SpacetimeFile, PeriodicCoordinateGivesPeriodicDefaultRegion) {
  const Spacetime st = parse_spacetime(
      "dimension 2\ncoordinates t x periodic 2\nmetric\n-1,\n0, 1\nend\norientation 1, 0\n");
  const Region r = st.region("default");
  ASSERT_TRUE(r.box);
  EXPECT_EQ(r.box->lo[1], 0.0);
  EXPECT_EQ(r.box->hi[1], 2.0);
}

TEST(SpacetimeFile, LoadSpecAndDigestInput) {
  const LoadedSpacetime a = load_spacetime("builtin:minkowski");
  const LoadedSpacetime b = load_spacetime("builtin:minkowski", {{"n", 3}});
  EXPECT_NE(a.canonical_input, b.canonical_input);
  EXPECT_EQ(b.spacetime.metric->dim(), 3);
  EXPECT_THROW(load_spacetime("/nonexistent/file.st"), FormatError);
}

TEST(SpacetimeFile, ParseVector) {
  const Vec v = parse_vector("1,-2.5,3e-1");
  ASSERT_EQ(v.size(), 3);
  EXPECT_EQ(v(1), -2.5);
  EXPECT_THROW(parse_vector("1, 2"), FormatError);
  EXPECT_THROW(parse_vector("1,,2"), FormatError);
  EXPECT_THROW(parse_vector("1,2", 3), FormatError);
  EXPECT_THROW(parse_vector("nan,1"), FormatError);
  EXPECT_THROW(parse_vector("1,2,3,4,5,6,7"), FormatError);
}

TEST(SpacetimeFile, ShippedSamples) {
  const std::string dir = std::string(LORENTZ_SOURCE_DIR) + "/spacetimes/";
  const Spacetime kasner = load_spacetime(dir + "kasner.st").spacetime;
  Vec p = Vec::Zero(4);
  p(0) = 1.5;
  const LocalGeometry geo = local_geometry(*kasner.metric, p);
  EXPECT_LT(geo.ricci().cwiseAbs().maxCoeff(), 1e-12);
  // vacuum Kasner: K = -16 p1 p2 p3 / t^4 with exponents (2/3, 2/3, -1/3)
  EXPECT_NEAR(geo.kretschmann(), 16.0 * 4.0 / 27.0 / std::pow(1.5, 4), 1e-10);
  const Spacetime rindler = load_spacetime(dir + "rindler_wedge.st").spacetime;
  EXPECT_EQ(rindler.metric->dim(), 3);
}
