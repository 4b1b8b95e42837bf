#pragma once

#include <vector>

#include "lorentz/linalg.hpp"

namespace lorentz {

enum class Variance { upper, lower };

/// Dense tensor at a point. Components are stored row-major, first index slowest.
class TensorValue {
 public:
  TensorValue() = default;
  TensorValue(int dim, std::vector<Variance> variance);
  TensorValue(int dim, std::vector<Variance> variance, std::vector<double> components);

  static TensorValue scalar(double v);
  static TensorValue vector(const Vec& v, Variance var = Variance::upper);
  static TensorValue matrix(const Mat& m, Variance a, Variance b);

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(variance_.size()); }
  const std::vector<Variance>& variance() const { return variance_; }
  const std::vector<double>& components() const { return components_; }
  std::vector<double>& components() { return components_; }

  double& operator()(std::initializer_list<int> idx);
  double operator()(std::initializer_list<int> idx) const;
  double& at(const std::vector<int>& idx);
  double at(const std::vector<int>& idx) const;

  double max_abs() const;
  Mat as_matrix() const;  // rank 2 only
  Vec as_vector() const;  // rank 1 only

  TensorValue operator+(const TensorValue& o) const;
  TensorValue operator*(double s) const;

 private:
  std::size_t offset(const int* idx, std::size_t count) const;

  int dim_ = 0;
  std::vector<Variance> variance_;
  std::vector<double> components_;
};

/// Metric at a point together with its inverse.
class MetricValue {
 public:
  /// Throws SingularMetric when the reciprocal condition number is below 1e-12
  /// or the matrix is not symmetric.
  explicit MetricValue(const Mat& g);

  int dim() const { return static_cast<int>(g_.rows()); }
  const Mat& g() const { return g_; }
  const Mat& inverse() const { return g_inv_; }
  double rcond() const { return rcond_; }

  /// Number of negative eigenvalues.
  int index() const;
  bool lorentzian() const { return index() == 1; }

  double inner(const Vec& u, const Vec& v) const { return u.dot(g_ * v); }
  Vec lower(const Vec& v) const { return g_ * v; }
  Vec raise(const Vec& w) const { return g_inv_ * w; }

 private:
  Mat g_;
  Mat g_inv_;
  double rcond_ = 0.0;
};

enum class IndexMove { raise, lower };

/// Contract slot `slot` with g (lower) or g^{-1} (raise). Throws SlotError.
TensorValue move_index(const MetricValue& m, const TensorValue& t, int slot, IndexMove dir);

/// Contract an upper slot with a lower slot. Throws SlotError.
TensorValue contract(const TensorValue& t, int i, int j);

}  // namespace lorentz
