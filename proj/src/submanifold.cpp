#include "lorentz/submanifold.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lorentz/errors.hpp"
#include "lorentz/parallel.hpp"

namespace lorentz {

namespace {

std::string format_point(const Vec& u) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < u.size(); ++i) os << (i ? "," : "") << u(i);
  os << ")";
  return os.str();
}

}  // namespace

Embedding::Embedding(std::string name, SymbolTable symbols, std::vector<Expr> components, std::vector<double> params,
                     std::vector<std::optional<double>> periods, Box range, std::vector<int> grid, VectorFieldPtr hint)
    : name_(std::move(name)),
      symbols_(std::move(symbols)),
      components_(std::move(components)),
      params_(std::move(params)),
      periods_(std::move(periods)),
      range_(std::move(range)),
      grid_(std::move(grid)),
      hint_(std::move(hint)) {
  const int m = param_dim();
  if (m < 1 || ambient_dim() <= m) throw DimensionError("embedding needs 1 <= m < n");
  periods_.resize(m);
  if (range_.dim() != m) throw DimensionError("embedding parameter range has wrong dimension");
  if (grid_.empty()) grid_.assign(m, 32);
  if (static_cast<int>(grid_.size()) != m) throw DimensionError("embedding grid has wrong dimension");
}

bool Embedding::closed() const {
  for (const auto& p : periods_)
    if (!p) return false;
  return true;
}

std::vector<Jet2> Embedding::jets(const Vec& u) const {
  const int m = param_dim();
  if (u.size() != m) throw DimensionError("embedding: parameter point has wrong dimension");
  Vec uu = linear_ ? Vec(*linear_ * u) : u;
  std::vector<Jet2> out;
  out.reserve(components_.size());
  for (const Expr& e : components_) {
    Jet2 j = eval2(e, uu, params_);
    if (linear_) {
      const Mat& A = *linear_;
      j = Jet2(j.value, A.transpose() * j.gradient, A.transpose() * j.hessian * A);
    }
    out.push_back(std::move(j));
  }
  return out;
}

Point Embedding::point(const Vec& u) const {
  auto js = jets(u);
  Point x(ambient_dim());
  for (int i = 0; i < ambient_dim(); ++i) x(i) = js[i].value;
  return x;
}

Mat Embedding::jacobian(const Vec& u) const {
  auto js = jets(u);
  Mat J(ambient_dim(), param_dim());
  for (int i = 0; i < ambient_dim(); ++i) J.row(i) = js[i].gradient.transpose();
  return J;
}

std::vector<Mat> Embedding::hessians(const Vec& u) const {
  auto js = jets(u);
  std::vector<Mat> out;
  for (auto& j : js) out.push_back(j.hessian);
  return out;
}

std::vector<Vec> Embedding::grid_points() const {
  const int m = param_dim();
  std::vector<Vec> out;
  std::vector<int> idx(m, 0);
  for (;;) {
    Vec u(m);
    for (int a = 0; a < m; ++a) {
      double lo = range_.lo[a], hi = range_.hi[a];
      u(a) = lo + (idx[a] + 0.5) * (hi - lo) / grid_[a];
    }
    out.push_back(u);
    int a = m - 1;
    while (a >= 0 && ++idx[a] == grid_[a]) idx[a--] = 0;
    if (a < 0) break;
  }
  return out;
}

Embedding Embedding::reparametrized(const Mat& A) const {
  Embedding e = *this;
  e.linear_ = linear_ ? Mat(*linear_ * A) : A;
  return e;
}

Embedding Embedding::with_grid(std::vector<int> grid) const {
  Embedding e = *this;
  e.grid_ = std::move(grid);
  return e;
}

Embedding make_embedding(std::string name, const std::vector<std::string>& param_names,
                         const std::vector<std::string>& components, const std::map<std::string, double>& params,
                         std::vector<std::optional<double>> periods, std::optional<Box> range, std::vector<int> grid,
                         VectorFieldPtr hint) {
  std::vector<std::string> pnames;
  for (const auto& [k, v] : params) pnames.push_back(k);
  SymbolTable sym(param_names, pnames);
  std::vector<Expr> exprs;
  for (const auto& c : components) exprs.push_back(parse(c, sym));
  const int m = static_cast<int>(param_names.size());
  periods.resize(m);
  Box r = range ? *range : Box::unbounded(m);
  for (int a = 0; a < m; ++a)
    if (periods[a] && !range) {
      r.lo[a] = 0.0;
      r.hi[a] = *periods[a];
    }
  for (int a = 0; a < m; ++a)
    if (!std::isfinite(r.lo[a]) || !std::isfinite(r.hi[a]))
      throw DomainError("embedding '" + name + "': parameter range must be finite");
  return Embedding(std::move(name), sym, std::move(exprs), sym.bind(params), std::move(periods), r,
                   std::move(grid), std::move(hint));
}

InducedMetric induced(const MetricField& g, const Embedding& s, const Vec& u, double tau_c) {
  Mat J = s.jacobian(u);
  Eigen::JacobiSVD<Mat> svd(J);
  const Vec& sv = svd.singularValues();
  if (sv(0) == 0.0 || sv(sv.size() - 1) < 1e-10 * sv(0))
    throw DegenerateEmbedding("embedding '" + s.name() + "' has rank < m at u=" + format_point(u));
  InducedMetric im;
  MetricValue m = g.value(s.point(u));
  im.metric = J.transpose() * m.g() * J;
  im.metric = 0.5 * (im.metric + im.metric.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(im.metric, Eigen::EigenvaluesOnly);
  im.eigenvalues = es.eigenvalues();
  im.spacelike = im.eigenvalues(0) > tau_c * sv(0) * sv(0);
  return im;
}

Vec normal_part(const MetricValue& m, const Mat& J, const Vec& w) {
  Mat G = J.transpose() * m.g() * J;
  Vec rhs = J.transpose() * (m.g() * w);
  Vec c = G.ldlt().solve(rhs);
  return w - J * c;
}

ShapeTensor shape(const MetricField& g, const Embedding& s, const Vec& u, double tau_c) {
  InducedMetric im = induced(g, s, u, tau_c);
  if (!im.spacelike) throw NotSpacelike("embedding '" + s.name() + "' is not spacelike at u=" + format_point(u));
  Point x = s.point(u);
  Mat J = s.jacobian(u);
  auto hess = s.hessians(u);
  LocalGeometry geo = local_geometry(g, x, false);
  const MetricValue& m = geo.metric();
  const int mm = s.param_dim(), n = s.ambient_dim();
  ShapeTensor II;
  II.m = mm;
  II.components.resize(mm * mm);
  for (int a = 0; a < mm; ++a)
    for (int b = a; b < mm; ++b) {
      Vec A(n);
      for (int i = 0; i < n; ++i) A(i) = hess[i](a, b);
      A += geo.gamma_contract(J.col(a), J.col(b));
      Vec N = normal_part(m, J, A);
      II.components[a * mm + b] = N;
      II.components[b * mm + a] = N;
    }
  return II;
}

MeanCurvature mean_curv(const MetricField& g, const VectorField& X, const Embedding& s, const Vec& u,
                        const Tolerances& tol) {
  ShapeTensor II = shape(g, s, u, tol.tau_c);
  Point x = s.point(u);
  Mat J = s.jacobian(u);
  MetricValue m = g.value(x);
  Mat hinv = (J.transpose() * m.g() * J).inverse();
  const int mm = s.param_dim();
  Vec H = Vec::Zero(s.ambient_dim());
  for (int a = 0; a < mm; ++a)
    for (int b = 0; b < mm; ++b) H += hinv(a, b) * II(a, b);
  MeanCurvature mc;
  mc.base = x;
  mc.H = H;
  Vec Xv = X.at(x);
  mc.causal = causal_class(m, H, Xv, tol.tau_c, tol.tau_zero);
  mc.g_HH = m.inner(H, H);
  mc.g_HX = m.inner(H, Xv);
  double hn = H.norm();
  if (hn > 0) {
    for (int a = 0; a < mm; ++a)
      mc.orthogonality_defect = std::max(mc.orthogonality_defect, std::abs(m.inner(H, J.col(a))) / (hn * J.col(a).norm()));
  }
  return mc;
}

std::pair<Vec, Vec> future_null_normals(const MetricValue& m, const Mat& J, const Vec& X) {
  const int n = static_cast<int>(J.rows());
  // normal space = kernel of Jᵀ g
  Mat A = J.transpose() * m.g();
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  Mat V = svd.matrixV();
  Vec n1 = V.col(n - 2), n2 = V.col(n - 1);
  Mat G(2, 2);
  G << m.inner(n1, n1), m.inner(n1, n2), m.inner(n2, n1), m.inner(n2, n2);
  Eigen::SelfAdjointEigenSolver<Mat> es(G);
  if (!(es.eigenvalues()(0) < 0 && es.eigenvalues()(1) > 0))
    throw NotSpacelike("normal space is not Lorentzian");
  Vec c0 = es.eigenvectors().col(0) / std::sqrt(-es.eigenvalues()(0));
  Vec c1 = es.eigenvectors().col(1) / std::sqrt(es.eigenvalues()(1));
  Vec T = c0(0) * n1 + c0(1) * n2;
  Vec S = c1(0) * n1 + c1(1) * n2;
  if (m.inner(T, X) > 0) T = -T;
  Vec a = T + S, b = T - S;
  return {a / a.norm(), b / b.norm()};
}

NullData null_data(const MetricField& g, const VectorField& X, const Embedding& s, const Vec& u,
                   const VectorField* hint, const Tolerances& tol) {
  if (s.codim() != 2) throw WrongCodimension("null expansions need codimension 2");
  if (!hint) hint = s.hint().get();
  if (!hint) throw OrientationHintDegenerate("no outward hint supplied for '" + s.name() + "'");
  MeanCurvature mc = mean_curv(g, X, s, u, tol);
  Point x = mc.base;
  MetricValue m = g.value(x);
  Mat J = s.jacobian(u);
  auto [a, b] = future_null_normals(m, J, X.at(x));
  Vec h = hint->at(x);
  if (h.norm() == 0.0) throw OrientationHintDegenerate("outward hint vanishes");
  double ca = a.dot(h) / h.norm(), cb = b.dot(h) / h.norm();
  if (std::abs(ca - cb) <= 1e-9) throw OrientationHintDegenerate("outward hint does not separate the null normals");
  NullData nd;
  nd.K_plus = ca > cb ? a : b;
  nd.K_minus = ca > cb ? b : a;
  double k = std::sqrt(-m.inner(nd.K_plus, nd.K_minus));
  nd.K_plus /= k;
  nd.K_minus /= k;
  nd.theta_plus = -m.inner(mc.H, nd.K_plus);
  nd.theta_minus = -m.inner(mc.H, nd.K_minus);
  return nd;
}

const char* to_string(TrappedClass c) {
  switch (c) {
    case TrappedClass::future_trapped: return "future_trapped";
    case TrappedClass::weakly_future_trapped: return "weakly_future_trapped";
    case TrappedClass::not_weakly_trapped: return "not_weakly_trapped";
  }
  return "?";
}

const char* to_string(TrappedSubtype s) {
  switch (s) {
    case TrappedSubtype::none: return "none";
    case TrappedSubtype::extremal: return "extremal";
    case TrappedSubtype::mots: return "mots";
    case TrappedSubtype::null_h: return "null_h";
    case TrappedSubtype::mixed: return "mixed";
  }
  return "?";
}

TrappedVerdict classify(const MetricField& g, const VectorField& X, const Embedding& s, const Tolerances& tol,
                        int jobs) {
  auto grid = s.grid_points();
  TrappedVerdict v;
  v.records.resize(grid.size());
  const bool codim2 = s.codim() == 2 && s.hint();
  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    const Vec& u = grid[i];
    MeanCurvature mc;
    try {
      mc = mean_curv(g, X, s, u, tol);
    } catch (const NotSpacelike&) {
      throw NotSpacelike("submanifold '" + s.name() + "' is not spacelike at grid point u=" + format_point(u));
    }
    TrappedRecord r;
    r.u = u;
    r.x = mc.base;
    r.H_norm = mc.H.norm();
    r.h_causal = mc.causal.causal;
    r.h_orientation = mc.causal.orientation;
    Vec Xv = X.at(mc.base);
    if (r.H_norm > tol.tau_trap) {
      r.g_HH = mc.g_HH / (r.H_norm * r.H_norm);
      r.g_HX = mc.g_HX / (r.H_norm * Xv.norm());
    }
    if (codim2) {
      NullData nd = null_data(g, X, s, u, nullptr, tol);
      r.theta_plus = nd.theta_plus;
      r.theta_minus = nd.theta_minus;
    }
    v.records[i] = r;
  });
  double margin = std::numeric_limits<double>::infinity();
  bool extremal = true, mots = codim2, null_h = false;
  for (std::size_t i = 0; i < v.records.size(); ++i) {
    const auto& r = v.records[i];
    double mi = std::min(-r.g_HH, r.g_HX);
    margin = std::min(margin, mi);
    if (!v.witness_not_trapped && !(mi > tol.tau_trap)) v.witness_not_trapped = i;
    if (!v.witness_not_weak && !(mi >= -tol.tau_trap)) v.witness_not_weak = i;
    if (r.H_norm > tol.tau_trap) extremal = false;
    if (!r.theta_plus || std::abs(*r.theta_plus) > tol.tau_trap) mots = false;
    if (r.H_norm > tol.tau_trap && r.h_causal == Causal::null && r.h_orientation == Orientation::past) null_h = true;
  }
  v.margin = margin;
  if (!v.witness_not_trapped)
    v.cls = TrappedClass::future_trapped;
  else if (!v.witness_not_weak)
    v.cls = TrappedClass::weakly_future_trapped;
  else
    v.cls = TrappedClass::not_weakly_trapped;
  if (v.cls == TrappedClass::weakly_future_trapped) {
    if (extremal)
      v.subtype = TrappedSubtype::extremal;
    else if (mots)
      v.subtype = TrappedSubtype::mots;
    else if (null_h)
      v.subtype = TrappedSubtype::null_h;
    else
      v.subtype = TrappedSubtype::mixed;
  }
  return v;
}

}  // namespace lorentz
