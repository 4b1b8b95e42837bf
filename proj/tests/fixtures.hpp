#pragma once
// Random conformal factors shared by tests and the acceptance driver.

#include <memory>

#include "lorentz/perturb.hpp"
#include "lorentz/random.hpp"

namespace fixtures {

/// Quadratic polynomial in the displacement times the standard cutoff, centred at c.
inline std::shared_ptr<lorentz::BumpField> random_bump(lorentz::Rng& rng, const lorentz::MetricField& g,
                                                       const lorentz::Point& c, double scale = 0.3) {
  using namespace lorentz;
  const int n = static_cast<int>(c.size());
  const double rho = default_bump_radius(g, c);
  Vec lin(n);
  Mat quad(n, n);
  const double c0 = scale * rng.normal();
  for (int i = 0; i < n; ++i) lin(i) = scale * rng.normal() / rho;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) quad(i, j) = quad(j, i) = scale * rng.normal() / (rho * rho);
  auto core = [n, c0, lin, quad](const Point&, const Vec& d) {
    Jet2 out = Jet2::constant(n, c0);
    for (int i = 0; i < n; ++i) {
      const Jet2 di = Jet2::variable(n, i, d(i));
      out = out + lin(i) * di;
      for (int j = 0; j < n; ++j) out = out + (0.5 * quad(i, j)) * (di * Jet2::variable(n, j, d(j)));
    }
    return out;
  };
  return std::make_shared<BumpField>(c, rho, core, g.periods());
}

/// Point near c, inside the inner quarter of the bump where the cutoff is 1 or transitioning.
inline lorentz::Point jitter(lorentz::Rng& rng, const lorentz::Point& c, double r) {
  lorentz::Point p = c;
  for (int i = 0; i < p.size(); ++i) p(i) += r * (2 * rng.uniform() - 1);
  return p;
}

}  // namespace fixtures
