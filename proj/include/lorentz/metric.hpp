#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lorentz/expr.hpp"
#include "lorentz/tensor.hpp"

namespace lorentz {

/// Axis-aligned coordinate box; bounds may be infinite.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box unbounded(int n);
  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Point& p) const;
  bool contains_open(const Point& p) const;
  Point center() const;
};

/// Scalar field on a chart with exact 2-jets.
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual int dim() const = 0;
  virtual Jet2 jet(const Point& p) const = 0;
  double value(const Point& p) const { return jet(p).value; }
};

using ScalarFieldPtr = std::shared_ptr<const ScalarField>;

class ExprScalarField : public ScalarField {
 public:
  ExprScalarField(Expr e, std::vector<double> params) : expr_(std::move(e)), params_(std::move(params)) {}
  int dim() const override { return expr_.coordinate_count(); }
  Jet2 jet(const Point& p) const override { return eval2(expr_, p, params_); }

 private:
  Expr expr_;
  std::vector<double> params_;
};

/// c * f
class ScaledScalarField : public ScalarField {
 public:
  ScaledScalarField(ScalarFieldPtr f, double c) : f_(std::move(f)), c_(c) {}
  int dim() const override { return f_->dim(); }
  Jet2 jet(const Point& p) const override { return c_ * f_->jet(p); }

 private:
  ScalarFieldPtr f_;
  double c_;
};

class ConstantScalarField : public ScalarField {
 public:
  ConstantScalarField(int dim, double c) : dim_(dim), c_(c) {}
  int dim() const override { return dim_; }
  Jet2 jet(const Point&) const override { return Jet2::constant(dim_, c_); }

 private:
  int dim_;
  double c_;
};

/// Vector field on a chart (components only, no derivatives).
class VectorField {
 public:
  virtual ~VectorField() = default;
  virtual int dim() const = 0;
  virtual Vec at(const Point& p) const = 0;
};

using VectorFieldPtr = std::shared_ptr<const VectorField>;

class ExprVectorField : public VectorField {
 public:
  ExprVectorField(std::vector<Expr> components, std::vector<double> params)
      : components_(std::move(components)), params_(std::move(params)) {}
  int dim() const override { return static_cast<int>(components_.size()); }
  Vec at(const Point& p) const override;

 private:
  std::vector<Expr> components_;
  std::vector<double> params_;
};

class ConstantVectorField : public VectorField {
 public:
  explicit ConstantVectorField(Vec v) : v_(std::move(v)) {}
  int dim() const override { return static_cast<int>(v_.size()); }
  Vec at(const Point&) const override { return v_; }

 private:
  Vec v_;
};

/// Components g_ij of a metric at a point as 2-jets.
class MetricJet {
 public:
  explicit MetricJet(int n) : n_(n), c_(static_cast<std::size_t>(n * n)) {}
  int dim() const { return n_; }
  const Jet2& operator()(int i, int j) const { return c_[i * n_ + j]; }
  void set(int i, int j, const Jet2& v) {
    c_[i * n_ + j] = v;
    c_[j * n_ + i] = v;
  }
  Mat value() const;
  /// d_k g_ij
  double d(int k, int i, int j) const { return c_[i * n_ + j].gradient(k); }
  /// d_k d_l g_ij
  double dd(int k, int l, int i, int j) const { return c_[i * n_ + j].hessian(k, l); }

 private:
  int n_;
  std::vector<Jet2> c_;
};

/// Symmetric (0,2) tensor field over a chart. Immutable; share via MetricFieldPtr.
class MetricField {
 public:
  virtual ~MetricField() = default;

  int dim() const { return static_cast<int>(coordinates_.size()); }
  const std::vector<std::string>& coordinates() const { return coordinates_; }
  const std::vector<std::optional<double>>& periods() const { return periods_; }
  const Box& domain() const { return domain_; }
  bool has_periods() const;

  /// Non-periodic coordinates must lie strictly inside the domain box.
  bool in_domain(const Point& p) const;
  /// Periodic coordinates reduced into [0, period).
  Point canonical(const Point& p) const;

  MetricJet jet(const Point& p) const { return jet_at(canonical(p)); }
  MetricValue value(const Point& p) const { return MetricValue(jet(p).value()); }

 protected:
  MetricField(std::vector<std::string> coordinates, std::vector<std::optional<double>> periods, Box domain);
  virtual MetricJet jet_at(const Point& canonical_point) const = 0;

 private:
  std::vector<std::string> coordinates_;
  std::vector<std::optional<double>> periods_;
  Box domain_;
};

using MetricFieldPtr = std::shared_ptr<const MetricField>;

/// Metric given by lower-triangle component expressions.
class ExprMetricField : public MetricField {
 public:
  /// `lower_triangle` rows: row i holds g_i0 .. g_ii.
  ExprMetricField(SymbolTable symbols, std::vector<Expr> lower_triangle, std::vector<double> params,
                  std::vector<std::optional<double>> periods = {}, std::optional<Box> domain = std::nullopt);

  const SymbolTable& symbols() const { return symbols_; }
  const std::vector<double>& params() const { return params_; }

  /// Periodic invariance sampled at `samples` random points: max |g(x) - g(x + period e_i)|.
  double periodic_defect(int samples, std::uint64_t seed) const;

 protected:
  MetricJet jet_at(const Point& p) const override;

 private:
  SymbolTable symbols_;
  std::vector<Expr> lower_;
  std::vector<double> params_;
};

/// e^{2f} g with exact product/chain rule jets.
class ConformalMetricField : public MetricField {
 public:
  ConformalMetricField(MetricFieldPtr base, ScalarFieldPtr factor);
  const MetricFieldPtr& base() const { return base_; }
  const ScalarFieldPtr& factor() const { return factor_; }

 protected:
  MetricJet jet_at(const Point& p) const override;

 private:
  MetricFieldPtr base_;
  ScalarFieldPtr factor_;
};

/// Convenience: build an ExprMetricField from strings.
MetricFieldPtr make_expr_metric(const std::vector<std::string>& coordinates,
                                const std::vector<std::string>& lower_triangle,
                                const std::map<std::string, double>& params = {},
                                std::vector<std::optional<double>> periods = {},
                                std::optional<Box> domain = std::nullopt);

ScalarFieldPtr make_expr_scalar(const std::vector<std::string>& coordinates, const std::string& text,
                                const std::map<std::string, double>& params = {});

VectorFieldPtr make_expr_vector(const std::vector<std::string>& coordinates,
                                const std::vector<std::string>& components,
                                const std::map<std::string, double>& params = {});

}  // namespace lorentz
