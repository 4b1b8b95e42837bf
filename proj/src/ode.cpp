#include "lorentz/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lorentz/errors.hpp"

namespace lorentz::ode {

namespace {

// Dormand–Prince coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

}  // namespace

void dp_step(const Rhs& f, const State& y, double h, State& y5, State& err) {
  (void)c2, (void)c3, (void)c4, (void)c5;
  State k1 = f(y);
  State k2 = f(y + h * (a21 * k1));
  State k3 = f(y + h * (a31 * k1 + a32 * k2));
  State k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  State k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  State k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  State k7 = f(y5);
  err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
}

Trajectory integrate(const Rhs& f, const State& y0, double T, const Settings& st,
                     const std::function<bool(const State&)>& valid) {
  Trajectory out;
  out.s.push_back(0.0);
  out.y.push_back(y0);
  if (T == 0.0) return out;
  const double dir = T > 0 ? 1.0 : -1.0;
  const double span = std::abs(T);
  double h = std::min({st.initial_step, st.max_step, span});
  double s = 0.0;
  State y = y0, y5, err;
  int steps = 0;
  while (span - s > 1e-14 * std::max(1.0, span)) {
    if (++steps > st.max_steps) {
      std::ostringstream os;
      os << "step budget exhausted at s=" << dir * s;
      throw StepFailure(os.str());
    }
    h = std::min(h, span - s);
    bool domain_failure = false;
    double ratio = 0.0;
    try {
      dp_step(f, y, dir * h, y5, err);
      if (!y5.allFinite() || !valid(y5)) {
        domain_failure = true;
      } else {
        for (Eigen::Index i = 0; i < y.size(); ++i)
          ratio = std::max(ratio, std::abs(err(i)) / (st.tol * (1.0 + std::max(std::abs(y(i)), std::abs(y5(i))))));
        if (!std::isfinite(ratio)) domain_failure = true;
      }
    } catch (const DomainError&) {
      domain_failure = true;
    } catch (const SingularMetric&) {
      domain_failure = true;
    }
    if (domain_failure) {
      ++out.rejected;
      h *= 0.25;
      if (h < st.min_step) {
        out.exited = true;
        return out;
      }
      continue;
    }
    if (ratio <= 1.0) {
      s += h;
      y = y5;
      out.s.push_back(dir * s);
      out.y.push_back(y);
      out.steps.push_back(dir * h);
      double grow = ratio > 0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
      h = std::min(st.max_step, h * std::clamp(grow, 0.2, 5.0));
    } else {
      ++out.rejected;
      h *= std::clamp(0.9 * std::pow(ratio, -0.25), 0.1, 0.9);
      if (h < st.min_step) {
        std::ostringstream os;
        os << "step size underflow at s=" << dir * s << ", last point";
        for (Eigen::Index i = 0; i < y.size(); ++i) os << (i ? "," : " ") << y(i);
        throw StepFailure(os.str());
      }
    }
  }
  return out;
}

}  // namespace lorentz::ode
