#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace lorentz::ode {

using State = Eigen::VectorXd;
/// Autonomous right-hand side. May throw DomainError / SingularMetric when
/// evaluated outside the chart; the adaptive driver treats that as a rejection.
using Rhs = std::function<State(const State&)>;

/// One Dormand–Prince 5(4) step: fifth-order solution and embedded error estimate.
void dp_step(const Rhs& f, const State& y, double h, State& y5, State& err);

struct Settings {
  double tol = 1e-11;
  double initial_step = 1e-2;
  double min_step = 1e-13;
  double max_step = 0.1;
  int max_steps = 200000;
};

struct Trajectory {
  std::vector<double> s;
  std::vector<State> y;
  std::vector<double> steps;
  int rejected = 0;
  bool exited = false;  // left the region accepted by `valid`
};

/// Adaptive integration over [0, T] (T may be negative). Throws StepFailure
/// when the error control drives the step below `min_step`.
Trajectory integrate(const Rhs& f, const State& y0, double T, const Settings& settings,
                     const std::function<bool(const State&)>& valid);

}  // namespace lorentz::ode
