#include "lorentz/metric.hpp"

#include <cmath>

#include "lorentz/errors.hpp"
#include "lorentz/random.hpp"

namespace lorentz {

Box Box::unbounded(int n) {
  Box b;
  b.lo.assign(n, -std::numeric_limits<double>::infinity());
  b.hi.assign(n, std::numeric_limits<double>::infinity());
  return b;
}

bool Box::contains(const Point& p) const {
  for (int i = 0; i < dim(); ++i)
    if (!(p(i) >= lo[i] && p(i) <= hi[i])) return false;
  return true;
}

bool Box::contains_open(const Point& p) const {
  for (int i = 0; i < dim(); ++i)
    if (!(p(i) > lo[i] && p(i) < hi[i])) return false;
  return true;
}

Point Box::center() const {
  Point c(dim());
  for (int i = 0; i < dim(); ++i) {
    const bool flo = std::isfinite(lo[i]), fhi = std::isfinite(hi[i]);
    if (flo && fhi) c(i) = 0.5 * (lo[i] + hi[i]);
    else if (flo) c(i) = lo[i] + 1.0;
    else if (fhi) c(i) = hi[i] - 1.0;
    else c(i) = 0.0;
  }
  return c;
}

Vec ExprVectorField::at(const Point& p) const {
  Vec v(dim());
  for (int i = 0; i < dim(); ++i)
    v(i) = eval(components_[i], std::span<const double>(p.data(), static_cast<std::size_t>(p.size())), params_);
  return v;
}

Mat MetricJet::value() const {
  Mat m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = c_[i * n_ + j].value;
  return m;
}

MetricField::MetricField(std::vector<std::string> coordinates, std::vector<std::optional<double>> periods,
                         Box domain)
    : coordinates_(std::move(coordinates)), periods_(std::move(periods)), domain_(std::move(domain)) {
  const int n = static_cast<int>(coordinates_.size());
  if (n < 1 || n > kMaxDim) throw DimensionError("chart dimension must be between 1 and 6");
  if (periods_.empty()) periods_.assign(n, std::nullopt);
  if (static_cast<int>(periods_.size()) != n) throw DimensionError("one period entry per coordinate");
  if (domain_.dim() == 0) domain_ = Box::unbounded(n);
  if (domain_.dim() != n) throw DimensionError("domain box dimension mismatch");
  for (const auto& p : periods_)
    if (p && !(*p > 0.0)) throw ParamError("periods must be positive");
}

bool MetricField::has_periods() const {
  for (const auto& p : periods_)
    if (p) return true;
  return false;
}

bool MetricField::in_domain(const Point& p) const {
  if (p.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (!std::isfinite(p(i))) return false;
    if (periods_[i]) continue;
    if (!(p(i) > domain_.lo[i] && p(i) < domain_.hi[i])) return false;
  }
  return true;
}

Point MetricField::canonical(const Point& p) const {
  if (p.size() != dim()) throw DimensionError("point dimension does not match the chart");
  Point q = p;
  for (int i = 0; i < dim(); ++i) {
    if (!periods_[i]) continue;
    const double L = *periods_[i];
    q(i) = p(i) - L * std::floor(p(i) / L);
    if (q(i) >= L) q(i) -= L;
  }
  return q;
}

ExprMetricField::ExprMetricField(SymbolTable symbols, std::vector<Expr> lower_triangle, std::vector<double> params,
                                 std::vector<std::optional<double>> periods, std::optional<Box> domain)
    : MetricField(symbols.coordinates(), std::move(periods), domain.value_or(Box{})),
      symbols_(std::move(symbols)),
      lower_(std::move(lower_triangle)),
      params_(std::move(params)) {
  const std::size_t n = static_cast<std::size_t>(dim());
  if (lower_.size() != n * (n + 1) / 2)
    throw FormatError("metric needs exactly n(n+1)/2 lower-triangle components");
}

MetricJet ExprMetricField::jet_at(const Point& p) const {
  const int n = dim();
  MetricJet j(n);
  std::size_t k = 0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c <= r; ++c) j.set(r, c, eval2(lower_[k++], p, params_));
  return j;
}

double ExprMetricField::periodic_defect(int samples, std::uint64_t seed) const {
  Rng rng(seed);
  const int n = dim();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Point x(n);
    for (int i = 0; i < n; ++i) {
      if (periods()[i]) x(i) = rng.uniform(0.0, *periods()[i]);
      else if (std::isfinite(domain().lo[i]) && std::isfinite(domain().hi[i]))
        x(i) = rng.uniform(domain().lo[i], domain().hi[i]);
      else x(i) = rng.uniform(-1.0, 1.0) + domain().center()(i);
    }
    for (int i = 0; i < n; ++i) {
      if (!periods()[i]) continue;
      Point y = x;
      y(i) += *periods()[i];
      // Evaluate raw expressions at both points, bypassing canonicalisation.
      const Mat a = jet_at(x).value();
      const Mat b = jet_at(y).value();
      worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

ConformalMetricField::ConformalMetricField(MetricFieldPtr base, ScalarFieldPtr factor)
    : MetricField(base->coordinates(), base->periods(), base->domain()),
      base_(std::move(base)),
      factor_(std::move(factor)) {
  if (factor_->dim() != dim()) throw DimensionError("conformal factor dimension mismatch");
}

MetricJet ConformalMetricField::jet_at(const Point& p) const {
  const MetricJet b = base_->jet(p);
  const Jet2 f = factor_->jet(p);
  const Jet2 scale = exp(2.0 * f);
  const int n = dim();
  MetricJet out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) out.set(i, j, scale * b(i, j));
  return out;
}

MetricFieldPtr make_expr_metric(const std::vector<std::string>& coordinates,
                                const std::vector<std::string>& lower_triangle,
                                const std::map<std::string, double>& params,
                                std::vector<std::optional<double>> periods, std::optional<Box> domain) {
  std::vector<std::string> names;
  for (const auto& [k, v] : params) names.push_back(k);
  SymbolTable symbols(coordinates, names);
  std::vector<Expr> exprs;
  exprs.reserve(lower_triangle.size());
  for (const auto& s : lower_triangle) exprs.push_back(parse(s, symbols));
  return std::make_shared<ExprMetricField>(symbols, std::move(exprs), symbols.bind(params), std::move(periods),
                                           std::move(domain));
}

ScalarFieldPtr make_expr_scalar(const std::vector<std::string>& coordinates, const std::string& text,
                                const std::map<std::string, double>& params) {
  std::vector<std::string> names;
  for (const auto& [k, v] : params) names.push_back(k);
  SymbolTable symbols(coordinates, names);
  return std::make_shared<ExprScalarField>(parse(text, symbols), symbols.bind(params));
}

VectorFieldPtr make_expr_vector(const std::vector<std::string>& coordinates,
                                const std::vector<std::string>& components,
                                const std::map<std::string, double>& params) {
  std::vector<std::string> names;
  for (const auto& [k, v] : params) names.push_back(k);
  SymbolTable symbols(coordinates, names);
  std::vector<Expr> exprs;
  for (const auto& s : components) exprs.push_back(parse(s, symbols));
  return std::make_shared<ExprVectorField>(std::move(exprs), symbols.bind(params));
}

}  // namespace lorentz
