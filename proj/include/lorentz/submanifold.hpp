#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lorentz/expr.hpp"
#include "lorentz/geometry.hpp"
#include "lorentz/metric.hpp"
#include "lorentz/tolerances.hpp"

namespace lorentz {

/// Parametric map u ↦ x(u) from an m-dimensional parameter box into the chart.
class Embedding {
 public:
  Embedding(std::string name, SymbolTable symbols, std::vector<Expr> components, std::vector<double> params,
            std::vector<std::optional<double>> periods, Box range, std::vector<int> grid, VectorFieldPtr hint);

  const std::string& name() const { return name_; }
  int param_dim() const { return symbols_.coordinate_count(); }
  int ambient_dim() const { return static_cast<int>(components_.size()); }
  int codim() const { return ambient_dim() - param_dim(); }
  const std::vector<std::string>& param_names() const { return symbols_.coordinates(); }
  const std::vector<std::optional<double>>& periods() const { return periods_; }
  bool closed() const;  // every parameter periodic
  const Box& range() const { return range_; }
  const std::vector<int>& grid() const { return grid_; }
  const VectorFieldPtr& hint() const { return hint_; }

  Point point(const Vec& u) const;
  /// n x m matrix ∂x^i/∂u^a.
  Mat jacobian(const Vec& u) const;
  /// Per ambient component: m x m matrix ∂²x^i/∂u^a∂u^b.
  std::vector<Mat> hessians(const Vec& u) const;

  /// Cell-centered grid, last parameter fastest.
  std::vector<Vec> grid_points() const;

  /// Same map precomposed with u ↦ A u (A invertible); ranges are not transformed.
  Embedding reparametrized(const Mat& A) const;
  Embedding with_grid(std::vector<int> grid) const;

 private:
  std::vector<Jet2> jets(const Vec& u) const;

  std::string name_;
  SymbolTable symbols_;
  std::vector<Expr> components_;
  std::vector<double> params_;
  std::vector<std::optional<double>> periods_;
  Box range_;
  std::vector<int> grid_;
  VectorFieldPtr hint_;
  std::optional<Mat> linear_;  // reparametrization
};

using EmbeddingPtr = std::shared_ptr<const Embedding>;

/// `periods` has one entry per parameter; periodic parameters default to range [0, L).
Embedding make_embedding(std::string name, const std::vector<std::string>& param_names,
                         const std::vector<std::string>& components, const std::map<std::string, double>& params,
                         std::vector<std::optional<double>> periods, std::optional<Box> range, std::vector<int> grid,
                         VectorFieldPtr hint = nullptr);

struct InducedMetric {
  Mat metric;        // Jᵀ g J
  Vec eigenvalues;   // ascending
  bool spacelike = false;
};

InducedMetric induced(const MetricField& g, const Embedding& s, const Vec& u, double tau_c = 1e-9);

/// II_ab as ambient vectors.
struct ShapeTensor {
  int m = 0;
  std::vector<Vec> components;  // row-major in (a, b)
  const Vec& operator()(int a, int b) const { return components[a * m + b]; }
};

ShapeTensor shape(const MetricField& g, const Embedding& s, const Vec& u, double tau_c = 1e-9);

struct MeanCurvature {
  Point base;
  Vec H;
  CausalClass causal;
  double g_HH = 0.0;
  double g_HX = 0.0;
  double orthogonality_defect = 0.0;  // max_a |g(H, x_a)| / (|H|_h |x_a|_h)
};

MeanCurvature mean_curv(const MetricField& g, const VectorField& X, const Embedding& s, const Vec& u,
                        const Tolerances& tol = {});

/// Normal projection of an ambient vector along the tangent space of s at u.
Vec normal_part(const MetricValue& m, const Mat& J, const Vec& w);

struct NullData {
  Vec K_plus;
  Vec K_minus;
  double theta_plus = 0.0;
  double theta_minus = 0.0;
};

/// Future null normals labelled by the outward hint: K+ is the one whose h-cosine
/// with the hint is larger. Normalized to g(K+, K-) = -1.
NullData null_data(const MetricField& g, const VectorField& X, const Embedding& s, const Vec& u,
                   const VectorField* hint = nullptr, const Tolerances& tol = {});

/// Both future null normal directions (unnormalized, h-unit), codimension 2 only.
std::pair<Vec, Vec> future_null_normals(const MetricValue& m, const Mat& J, const Vec& X);

enum class TrappedClass { future_trapped, weakly_future_trapped, not_weakly_trapped };
enum class TrappedSubtype { none, extremal, mots, null_h, mixed };

const char* to_string(TrappedClass c);
const char* to_string(TrappedSubtype s);

struct TrappedRecord {
  Vec u;
  Point x;
  double g_HH = 0.0;  // h-normalized
  double g_HX = 0.0;  // h-normalized
  double H_norm = 0.0;
  Causal h_causal = Causal::zero;
  Orientation h_orientation = Orientation::none;
  std::optional<double> theta_plus;
  std::optional<double> theta_minus;
};

struct TrappedVerdict {
  TrappedClass cls = TrappedClass::not_weakly_trapped;
  TrappedSubtype subtype = TrappedSubtype::none;
  std::vector<TrappedRecord> records;
  std::optional<std::size_t> witness_not_trapped;  // first grid index violating the strict inequalities
  std::optional<std::size_t> witness_not_weak;     // first grid index violating the weak inequalities
  /// min over the grid of min(-g_HH, g_HX): future-trapped iff > tau_trap,
  /// weakly future-trapped iff >= -tau_trap.
  double margin = 0.0;
};

TrappedVerdict classify(const MetricField& g, const VectorField& X, const Embedding& s, const Tolerances& tol = {},
                        int jobs = 1);

}  // namespace lorentz
