#pragma once

#include "lorentz/geometry.hpp"
#include "lorentz/metric.hpp"
#include "lorentz/submanifold.hpp"

namespace lorentz {

/// ĝ = e^{2f} g with exact jets.
MetricFieldPtr rescale(MetricFieldPtr g, ScalarFieldPtr f);

/// (Xf)Y + (Yf)X - g(X, Y) grad_g f
Vec connection_delta(const MetricField& g, const ScalarField& f, const Point& p, const Vec& X, const Vec& Y);

struct ConformalMean {
  Vec H_hat;          // e^{-2f}(H - m (grad_g f)^⊥)
  double norm = 0.0;  // ĝ(Ĥ, Ĥ) = e^{-2f}[g(H,H) - 2m g(H, grad f) + m² g(grad f^⊥, grad f^⊥)]
  Vec H;              // mean curvature of g
  Vec grad_perp;      // (grad_g f)^⊥
  double f = 0.0;
};

ConformalMean conformal_mean(const MetricField& g, const VectorField& X, const Embedding& s, const ScalarField& f,
                             const Vec& u, const Tolerances& tol = {});

/// Riem(e^{2f}g) = e^{2f}(Riem - A ⊙ g), A = Hess f - df⊗df + ½|df|² g, ⊙ the Kulkarni–Nomizu product.
TensorValue conformal_riemann(const MetricField& g, const ScalarField& f, const Point& p);

/// Closed form against direct recomputation on the rescaled metric.
struct OracleComparison {
  double closed = 0.0;  // norm of the closed-form object (scalar value for scalars)
  double direct = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;  // abs_error / max(scale, tiny)
};

OracleComparison compare_connection_delta(const MetricFieldPtr& g, const ScalarFieldPtr& f, const Point& p,
                                          const Vec& X, const Vec& Y);
OracleComparison compare_mean(const MetricFieldPtr& g, const VectorField& X, const Embedding& s,
                              const ScalarFieldPtr& f, const Vec& u, const Tolerances& tol = {});
OracleComparison compare_riemann(const MetricFieldPtr& g, const ScalarFieldPtr& f, const Point& p);

}  // namespace lorentz
