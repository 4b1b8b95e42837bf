#pragma once

#include <vector>

#include "lorentz/geodesic.hpp"
#include "lorentz/jet.hpp"
#include "lorentz/metric.hpp"

namespace lorentz {

/// Riemann normal coordinates x ↦ exp_p(x^i e_i) for a g-orthonormal frame e_i.
class NormalChart {
 public:
  NormalChart(MetricFieldPtr g, Point p, Mat frame, double radius, GeodesicOptions opt = {});

  int dim() const { return static_cast<int>(p_.size()); }
  const Point& center() const { return p_; }
  const Mat& frame() const { return frame_; }
  double radius() const { return radius_; }

  /// Result is in the covering chart (periodic coordinates not reduced).
  Point forward(const Vec& x) const;
  /// d forward / dx from the geodesic variational equations (not finite differences).
  Mat jacobian(const Vec& x) const;
  /// Damped Newton on forward. Throws InversionFailure.
  Vec inverse(const Point& y) const;

  MetricValue pulled_metric(const Vec& x) const;
  /// Christoffel symbols of the pulled-back metric by central differences of pulled_metric.
  TensorValue pulled_christoffel(const Vec& x, double h = 1e-3) const;

  /// Second-order normal-coordinate functions E^{-1}[d + ½Γ_p(d, d)], d = y - p,
  /// whose 2-jets at p agree with the exact normal coordinates.
  std::vector<Jet2> quadratic_coordinates(const Point& y) const;

 private:
  void integrate(const Vec& x, Point* y, Mat* J) const;
  Vec displacement(const Point& y) const;

  MetricFieldPtr g_;
  Point p_;
  Mat frame_;
  Mat frame_inv_;
  double radius_;
  GeodesicOptions opt_;
  std::vector<Mat> gamma_p_;  // gamma_p_[k](a, b) = Γ^k_ab(p)
};

/// Checks the frame, then shrinks the radius (halving, at most 8 times) until
/// forward/inverse round trips succeed on a sample set. Throws FrameNotOrthonormal,
/// InversionFailure.
NormalChart normal_chart(MetricFieldPtr g, const Point& p, const Mat& frame, double radius = 0.5,
                         GeodesicOptions opt = {});

}  // namespace lorentz
