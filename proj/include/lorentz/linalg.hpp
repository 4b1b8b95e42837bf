#pragma once

#include <Eigen/Dense>

namespace lorentz {

/// Largest chart dimension supported. Small vectors and matrices below live
/// on the stack with a runtime size up to this bound.
inline constexpr int kMaxDim = 6;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

using Point = Vec;

inline Vec zero_vec(int n) { return Vec::Zero(n); }
inline Mat zero_mat(int n) { return Mat::Zero(n, n); }

inline Vec unit_vec(int n, int i) {
  Vec v = Vec::Zero(n);
  v(i) = 1.0;
  return v;
}

}  // namespace lorentz
