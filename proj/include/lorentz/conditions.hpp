#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lorentz/geodesic.hpp"
#include "lorentz/geometry.hpp"
#include "lorentz/metric.hpp"
#include "lorentz/submanifold.hpp"
#include "lorentz/tolerances.hpp"

namespace lorentz {

/// Sampled compact region. Points are drawn uniformly from the box (seeded) unless
/// an explicit list is given.
struct Region {
  std::optional<Box> box;
  std::vector<Point> points;
  int point_count = 16;
  int density = 64;  // causal directions per point, >= 8
  int iterations = 20;
  int restarts = 5;
  std::uint64_t seed = 0;
  int jobs = 1;

  /// Throws DomainError for an empty box or density < 8.
  std::vector<Point> sample_points(const MetricField& g) const;
};

enum class Verdict { holds_strictly, holds_weakly, violated, passed, inconclusive };
const char* to_string(Verdict v);

struct ConditionWitness {
  Point p;
  std::optional<Vec> v;
  std::optional<Vec> w;
  double value = 0.0;
};

struct ConditionReport {
  std::string condition;
  Verdict verdict = Verdict::violated;
  bool strict = false;
  double min_margin = 0.0;
  std::optional<ConditionWitness> witness;
  std::size_t samples = 0;
  std::string note;

  /// Strict conditions need holds_strictly; weak ones accept holds_weakly.
  bool holds() const;
};

Verdict margin_verdict(double min_value, double tau);

/// SE (strict) / E: Ric(v, v) over the causal shell.
ConditionReport ricci_condition(const MetricField& g, const Region& R, bool strict, const Tolerances& tol = {});
/// P (strict) / FP: Riem(w, v, v, w) for h-unit causal v and h-unit w ⊥_h v.
ConditionReport riem_condition(const MetricField& g, const Region& R, bool strict, bool timelike_only,
                               const Tolerances& tol = {});
/// O: smallest eigenvalue of the tidal operators.
ConditionReport tidal_condition(const MetricField& g, const Region& R, const Tolerances& tol = {});

enum class CertMode { orientation, temporal };
ConditionReport temporal_cert(const MetricField& g, const VectorField& X, const Region& R,
                              const Tolerances& tol = {});
ConditionReport temporal_cert(const MetricField& g, const ScalarField& t, const Region& R,
                              const Tolerances& tol = {});

struct Implication {
  std::string name;
  std::size_t checked = 0;
  std::size_t premise_true = 0;
  std::size_t violations = 0;
};

struct AuditViolation {
  std::string implication;
  Point p;
  Vec v;
  double ricci = 0.0, riem = 0.0, tidal = 0.0;
};

struct AuditReport {
  std::size_t samples = 0;
  std::vector<Implication> implications;
  std::vector<AuditViolation> violations;  // first few
  std::size_t violation_count = 0;
  bool ok() const { return violation_count == 0; }
};

/// Evaluates Ricci, Riemann and tidal margins on identical samples and checks
/// P ⇒ SE, P ⇒ O, O ⇒ E, FP ⇒ E per sample, O ⇒ FP per timelike sample and per point.
AuditReport inclusion_audit(const MetricField& g, const Region& R, const Tolerances& tol = {});

/// Per-sample values on a shared sample set (used by the audit and dual-mode checks).
struct ShellSample {
  std::size_t point_index = 0;
  Vec v;
  bool timelike = false;
  double ricci = 0.0;
  double riem = 0.0;
  double tidal = 0.0;
  double scale = 1.0;  // bound on g-norms of screen vectors in h units
};
std::vector<ShellSample> shell_samples(const MetricField& g, const Region& R, const Tolerances& tol = {});

struct GsResult {
  std::vector<double> s;
  std::vector<double> trace;
  double min_trace = 0.0;
  double s_at_min = 0.0;
  std::optional<double> first_negative;
  bool chart_exit = false;
};

/// Future normal direction at Σ(u0): "plus"/"minus" (null normals from the hint)
/// or "timelike" (future unit timelike normal, codimension 2).
Vec normal_direction(const MetricField& g, const VectorField& X, const Embedding& s, const Vec& u0,
                     const std::string& choice, const Tolerances& tol = {});

/// g^{ab} Riem(γ', E_a, E_b, γ') along the normal geodesic from Σ(u0) with
/// parallel-transported coordinate tangents E_a. Throws NotApplicable when the
/// direction is not future causal and normal.
GsResult gs_trace(const MetricField& g, const VectorField& X, const Embedding& s, const Vec& u0, const Vec& direction,
                  double length, const Tolerances& tol = {});

}  // namespace lorentz
