#pragma once

#include <vector>

#include "lorentz/metric.hpp"
#include "lorentz/tensor.hpp"
#include "lorentz/tolerances.hpp"

namespace lorentz {

/// Everything derivable at one point from the 2-jet of the metric.
///
/// Conventions: signature (-,+,...,+); R(X,Y)Z = ∇_X∇_Y Z - ∇_Y∇_X Z - ∇_[X,Y] Z;
/// Riem(X,Y,Z,W) = g(R(X,Y)Z, W), so Riem(w,v,v,w) is the sectional-type
/// quantity (positive on round spheres); Ric(Y,Z) = tr(X -> R(X,Y)Z).
class LocalGeometry {
 public:
  LocalGeometry(const MetricJet& jet, bool with_curvature);

  int dim() const { return n_; }
  const MetricValue& metric() const { return metric_; }
  bool has_curvature() const { return !riem_.empty(); }

  double gamma(int k, int i, int j) const { return gamma_[(k * n_ + i) * n_ + j]; }
  /// d_m Γ^k_ij
  double dgamma(int m, int k, int i, int j) const { return dgamma_[((m * n_ + k) * n_ + i) * n_ + j]; }
  /// R(∂i,∂j)∂k = rup(m,i,j,k) ∂m
  double rup(int m, int i, int j, int k) const { return rup_[((m * n_ + i) * n_ + j) * n_ + k]; }
  double riem(int i, int j, int k, int l) const { return riem_[((i * n_ + j) * n_ + k) * n_ + l]; }
  const Mat& ricci() const { return ricci_; }
  double ricci_scalar() const;
  double kretschmann() const;

  /// Γ(x, y) as a vector: Γ^k_ij x^i y^j.
  Vec gamma_contract(const Vec& x, const Vec& y) const;
  double riem(const Vec& a, const Vec& b, const Vec& c, const Vec& d) const;
  /// R(x,y)z
  Vec curvature(const Vec& x, const Vec& y, const Vec& z) const;
  /// M_ab = Riem(∂a, v, v, ∂b) in coordinates; Riem(w,v,v,w) = wᵀ M w.
  Mat tidal_form(const Vec& v) const;
  double ricci(const Vec& v) const { return v.dot(ricci_ * v); }

  TensorValue christoffel_tensor() const;
  TensorValue riemann_tensor() const;
  TensorValue ricci_tensor() const;

 private:
  int n_;
  MetricValue metric_;
  std::vector<double> gamma_;
  std::vector<double> dgamma_;
  std::vector<double> rup_;
  std::vector<double> riem_;
  Mat ricci_;
};

LocalGeometry local_geometry(const MetricField& g, const Point& p, bool with_curvature = true);

struct TangentVector {
  Point base;
  Vec components;
};

enum class Causal { timelike, null, spacelike, zero };
enum class Orientation { future, past, none };

struct CausalClass {
  Causal causal;
  Orientation orientation;
  bool operator==(const CausalClass&) const = default;
};

const char* to_string(Causal c);
const char* to_string(Orientation o);

/// Number of negative eigenvalues of g(p). Throws SingularMetric.
int signature(const MetricField& g, const Point& p);

/// Classify q = g(v,v) against ±tau_c·|v|_h²; future iff g(v,X) < 0.
/// Throws OrientationError when X is not timelike at the base point.
CausalClass causal_class(const MetricField& g, const TangentVector& v, const VectorField& X,
                         double tau_c = 1e-9, double tau_zero = 1e-12);
CausalClass causal_class(const MetricValue& m, const Vec& v, const Vec& X, double tau_c = 1e-9,
                         double tau_zero = 1e-12);

TensorValue christoffel(const MetricField& g, const Point& p);
TensorValue riemann(const MetricField& g, const Point& p);
TensorValue ricci(const MetricField& g, const Point& p);

/// Columns form a g-orthonormal basis; column 0 is timelike for Lorentzian g.
Mat orthonormal_frame(const MetricValue& m);

/// Screen space and tidal matrix of a causal vector.
struct TidalOperator {
  Vec v;             // vector actually used (g-unit when timelike)
  bool null = false;
  Vec ell;           // null partner with g(v, ell) = -1 (null case only)
  std::vector<Vec> screen;
  Mat matrix;        // Riem(e_a, v, v, e_b)
  Vec eigenvalues;   // ascending
};

/// Throws NotCausal for spacelike or zero v.
TidalOperator tidal(const MetricField& g, const TangentVector& v, double tau_c = 1e-9);
TidalOperator tidal(const LocalGeometry& geo, const Vec& v, bool unit_timelike = true, double tau_c = 1e-9);

/// g-orthonormal basis of the screen of a causal vector (v^⊥ or v^⊥ ∩ ell^⊥).
std::vector<Vec> screen_basis(const MetricValue& m, const Vec& v, const Vec* ell);

}  // namespace lorentz
