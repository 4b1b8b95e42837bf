#include "lorentz/tensor.hpp"

#include <cmath>
#include <numeric>

#include "lorentz/errors.hpp"

namespace lorentz {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

// Decompose a flat offset into a multi-index.
std::vector<int> unflatten(std::size_t off, int dim, int rank) {
  std::vector<int> idx(rank);
  for (int s = rank - 1; s >= 0; --s) {
    idx[s] = static_cast<int>(off % dim);
    off /= dim;
  }
  return idx;
}

}  // namespace

TensorValue::TensorValue(int dim, std::vector<Variance> variance)
    : dim_(dim), variance_(std::move(variance)) {
  components_.assign(ipow(dim_, rank()), 0.0);
}

TensorValue::TensorValue(int dim, std::vector<Variance> variance, std::vector<double> components)
    : dim_(dim), variance_(std::move(variance)), components_(std::move(components)) {
  if (components_.size() != ipow(dim_, rank()))
    throw DimensionError("tensor component count must be dim^rank");
}

TensorValue TensorValue::scalar(double v) { return TensorValue(1, {}, {v}); }

TensorValue TensorValue::vector(const Vec& v, Variance var) {
  TensorValue t(static_cast<int>(v.size()), {var});
  for (int i = 0; i < v.size(); ++i) t.components_[i] = v(i);
  return t;
}

TensorValue TensorValue::matrix(const Mat& m, Variance a, Variance b) {
  const int n = static_cast<int>(m.rows());
  TensorValue t(n, {a, b});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.components_[i * n + j] = m(i, j);
  return t;
}

std::size_t TensorValue::offset(const int* idx, std::size_t count) const {
  if (count != variance_.size()) throw SlotError("wrong number of indices");
  std::size_t off = 0;
  for (std::size_t s = 0; s < count; ++s) {
    if (idx[s] < 0 || idx[s] >= dim_) throw SlotError("index out of range");
    off = off * dim_ + idx[s];
  }
  return off;
}

double& TensorValue::operator()(std::initializer_list<int> idx) {
  return components_[offset(idx.begin(), idx.size())];
}
double TensorValue::operator()(std::initializer_list<int> idx) const {
  return components_[offset(idx.begin(), idx.size())];
}
double& TensorValue::at(const std::vector<int>& idx) { return components_[offset(idx.data(), idx.size())]; }
double TensorValue::at(const std::vector<int>& idx) const {
  return components_[offset(idx.data(), idx.size())];
}

double TensorValue::max_abs() const {
  double m = 0.0;
  for (double c : components_) m = std::max(m, std::abs(c));
  return m;
}

Mat TensorValue::as_matrix() const {
  if (rank() != 2) throw SlotError("as_matrix requires rank 2");
  Mat m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = components_[i * dim_ + j];
  return m;
}

Vec TensorValue::as_vector() const {
  if (rank() != 1) throw SlotError("as_vector requires rank 1");
  Vec v(dim_);
  for (int i = 0; i < dim_; ++i) v(i) = components_[i];
  return v;
}

TensorValue TensorValue::operator+(const TensorValue& o) const {
  if (o.dim_ != dim_ || o.variance_ != variance_) throw SlotError("tensor shapes differ");
  TensorValue r = *this;
  for (std::size_t i = 0; i < components_.size(); ++i) r.components_[i] += o.components_[i];
  return r;
}

TensorValue TensorValue::operator*(double s) const {
  TensorValue r = *this;
  for (double& c : r.components_) c *= s;
  return r;
}

MetricValue::MetricValue(const Mat& g) : g_(g) {
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw SingularMetric("metric is not symmetric");
  g_ = 0.5 * (g + g.transpose());
  Eigen::PartialPivLU<Mat> lu(g_);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  rcond_ = min_pivot > 0.0 ? lu.rcond() : 0.0;
  if (!(rcond_ >= 1e-12) || !std::isfinite(rcond_)) throw SingularMetric("metric is degenerate (rcond " + std::to_string(rcond_) + ")");
  g_inv_ = lu.inverse();
  g_inv_ = 0.5 * (g_inv_ + g_inv_.transpose()).eval();
}

int MetricValue::index() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(g_, Eigen::EigenvaluesOnly);
  int neg = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) < 0.0) ++neg;
  return neg;
}

TensorValue move_index(const MetricValue& m, const TensorValue& t, int slot, IndexMove dir) {
  if (slot < 0 || slot >= t.rank()) throw SlotError("slot out of range");
  if (m.dim() != t.dim()) throw SlotError("metric and tensor dimensions differ");
  const Variance want = dir == IndexMove::raise ? Variance::upper : Variance::lower;
  if (t.variance()[slot] == want) throw SlotError("slot already has the requested variance");
  const Mat& c = dir == IndexMove::raise ? m.inverse() : m.g();
  std::vector<Variance> var = t.variance();
  var[slot] = want;
  TensorValue out(t.dim(), var);
  const int n = t.dim();
  const int r = t.rank();
  for (std::size_t off = 0; off < out.components().size(); ++off) {
    std::vector<int> idx = unflatten(off, n, r);
    const int a = idx[slot];
    double sum = 0.0;
    for (int b = 0; b < n; ++b) {
      idx[slot] = b;
      sum += c(a, b) * t.at(idx);
    }
    out.components()[off] = sum;
  }
  return out;
}

TensorValue contract(const TensorValue& t, int i, int j) {
  if (i < 0 || j < 0 || i >= t.rank() || j >= t.rank() || i == j) throw SlotError("contraction slots out of range");
  if (t.variance()[i] == t.variance()[j]) throw SlotError("contraction needs one upper and one lower slot");
  const int n = t.dim();
  std::vector<Variance> var;
  for (int s = 0; s < t.rank(); ++s)
    if (s != i && s != j) var.push_back(t.variance()[s]);
  TensorValue out = var.empty() ? TensorValue::scalar(0.0) : TensorValue(n, var);
  const int r = static_cast<int>(var.size());
  for (std::size_t off = 0; off < out.components().size(); ++off) {
    std::vector<int> rest = r == 0 ? std::vector<int>{} : unflatten(off, n, r);
    std::vector<int> full(t.rank());
    double sum = 0.0;
    for (int a = 0; a < n; ++a) {
      int k = 0;
      for (int s = 0; s < t.rank(); ++s) full[s] = (s == i || s == j) ? a : rest[k++];
      sum += t.at(full);
    }
    out.components()[off] = sum;
  }
  return out;
}

}  // namespace lorentz
