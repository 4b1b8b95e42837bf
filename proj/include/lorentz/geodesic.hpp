#pragma once

#include <vector>

#include "lorentz/geometry.hpp"
#include "lorentz/metric.hpp"

namespace lorentz {

struct GeodesicOptions {
  double eps_geo = 1e-8;
  double initial_step = 1e-2;
  double min_step = 1e-13;
  double max_step = 0.0;  // 0: length / 32
  int max_steps = 200000;
};

struct GeodesicSolution {
  std::vector<double> s;
  std::vector<Point> points;     // integrated in the covering chart
  std::vector<Point> canonical;  // periodic coordinates reduced
  std::vector<Vec> velocities;
  std::vector<double> steps;     // accepted step sizes, steps[i] = s[i+1] - s[i]
  int rejected_steps = 0;
  bool chart_exit = false;
  double requested_length = 0.0;
  double initial_norm = 0.0;  // g(v, v) at s = 0
  double max_norm_drift = 0.0;

  std::size_t size() const { return s.size(); }
  double final_s() const { return s.back(); }
};

/// x'' + Γ(x', x') = 0 by adaptive Dormand–Prince. Stops with chart_exit when the
/// curve leaves the domain; throws StepFailure if the step size underflows.
GeodesicSolution geodesic(const MetricField& g, const Point& p, const Vec& v, double length,
                          const GeodesicOptions& opt = {});

/// Transport vectors along a stored geodesic, replaying its accepted steps.
/// Result[i][j] is the j-th vector at sample i.
std::vector<std::vector<Vec>> parallel_transport(const MetricField& g, const GeodesicSolution& gamma,
                                                 const std::vector<Vec>& w0);
std::vector<Vec> parallel_transport(const MetricField& g, const GeodesicSolution& gamma, const Vec& w0);

struct GenericResult {
  bool satisfied = false;
  double s_star = 0.0;
  double max_ratio = 0.0;  // max over samples of |R(., v)v|_h / |v|_h²
};

/// Scan the samples of a geodesic for R(., γ')γ' != 0 beyond tau.
GenericResult generic_check(const MetricField& g, const GeodesicSolution& gamma, double tau = 1e-8);

}  // namespace lorentz
