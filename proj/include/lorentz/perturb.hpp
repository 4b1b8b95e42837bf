#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lorentz/conformal.hpp"
#include "lorentz/metric.hpp"
#include "lorentz/submanifold.hpp"
#include "lorentz/tolerances.hpp"

namespace lorentz {

/// C² cutoff: 1 on [0, 1/4], 0 on [1, inf), quintic smoothstep in between.
/// Returns (χ, χ', χ'').
struct CutoffValue {
  double value, d1, d2;
};
CutoffValue cutoff(double u);

/// core(x) · χ(|x - p|² / ρ²) with minimum-image displacement in periodic coordinates.
/// Identically zero (exact zero jet) outside the ball.
class BumpField : public ScalarField {
 public:
  /// The core receives the point and its displacement from the center.
  using Core = std::function<Jet2(const Point& x, const Vec& d)>;

  BumpField(Point center, double radius, Core core, std::vector<std::optional<double>> periods = {});

  int dim() const override { return static_cast<int>(center_.size()); }
  Jet2 jet(const Point& x) const override;

  const Point& center() const { return center_; }
  double radius() const { return radius_; }
  Box support_box() const;
  Vec displacement(const Point& x) const;

 private:
  Point center_;
  double radius_;
  Core core_;
  std::vector<std::optional<double>> periods_;
};

/// min(0.5, quarter distance to the domain boundary, quarter period).
/// Throws RadiusError when p is not interior.
double default_bump_radius(const MetricField& g, const Point& p);

/// Bump whose value and coordinate gradient at p are prescribed (affine core).
/// Throws RadiusError if the ball of radius rho does not fit in the chart.
std::shared_ptr<BumpField> bump(const MetricField& chart, const Point& p, double value, const Vec& gradient,
                                std::optional<double> rho = std::nullopt);

struct Certificate {
  int n = 0;
  double closed_form = 0.0;  // transformation law
  double direct = 0.0;       // recomputed on the rescaled metric
  double printed = 0.0;      // value of the published closed form
  double agreement = 0.0;    // |closed_form - direct| / max(|closed_form|, |direct|)
  double deviation = 0.0;    // direct / printed
  bool sign_ok = false;
};

struct SeminormRow {
  int n = 0;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};

struct PerturbationFamily {
  std::string construction;  // trapped_null, trapped_zero, curvature_timelike, curvature_null_spacelike, curvature_null_null
  std::string expected_sign;  // "positive" or "negative"
  std::string printed_formula;
  MetricFieldPtr base;
  std::shared_ptr<BumpField> phi;
  Point p;
  Vec v;
  Vec w;  // curvature families only
  int m = 0;
  std::vector<Certificate> certificates;
  std::vector<SeminormRow> seminorms;
  double seminorm_slope = 0.0;  // log-log fit of c2 against n
  bool support_warning = false;

  MetricFieldPtr member(int n) const;
  bool all_signs_ok() const;
  bool monotone_to_zero() const;
};

struct FamilyOptions {
  int n_max = 8;
  std::optional<double> radius;
  int seminorm_grid = 9;  // points per coordinate over the support box
  bool seminorms = true;
  Tolerances tol{};
};

/// Destroys weak trappedness at a point of Σ where H is zero or past null.
/// Throws NotApplicable when Σ is future-trapped at u or not weakly trapped at u.
PerturbationFamily trapped_family(MetricFieldPtr g, const VectorField& X, const Embedding& s, const Vec& u,
                                const FamilyOptions& opt = {});

/// Destroys weak causal curvature positivity at p given a vanishing witness.
/// Throws NotApplicable when Riem(w,v,v,w) != 0 at p or the pair is unusable.
PerturbationFamily curvature_family(MetricFieldPtr g, const Point& p, const Vec& v, const Vec& w,
                                const FamilyOptions& opt = {});

struct Witness {
  Vec v;
  Vec w;
  double value = 0.0;
};

/// Minimize |Riem(w,v,v,w)| over sampled h-unit causal v and h-unit w ⊥_h v.
std::optional<Witness> find_witness(const MetricField& g, const Point& p, std::uint64_t seed, int samples = 256,
                                    double tau = 1e-8);

struct SeminormResult {
  double value = 0.0;
  bool support_not_contained = false;
};

/// max over grid points of |∂^α (g1 - g2)_ij|, |α| <= s.
SeminormResult cs_seminorm(const MetricField& g1, const MetricField& g2, int s, const Box& K, int points_per_axis,
                           const BumpField* support = nullptr);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace lorentz
