#pragma once

namespace lorentz {

/// Numerical thresholds shared across modules; every report embeds a copy.
struct Tolerances {
  double tau_zero = 1e-12;  // auxiliary-norm zero vector
  double tau_c = 1e-9;      // causal character
  double eps_geo = 1e-8;    // geodesic invariants
  double tau_trap = 1e-9;   // trapped-set margins
  double tau_cond = 1e-8;   // curvature-condition margins
};

}  // namespace lorentz
