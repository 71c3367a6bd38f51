#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace lfbsde {

/// Symmetric 3x3 matrix. Only the upper triangle is stored, so symmetry holds by
/// construction.
class QuadraticForm3 {
 public:
  QuadraticForm3() = default;
  QuadraticForm3(double m11, double m22, double m33, double m12, double m13, double m23)
      : d_{m11, m22, m33}, off_{m12, m13, m23} {}

  double operator()(int i, int j) const {
    if (i == j) return d_[i];
    if (i > j) std::swap(i, j);
    return off_[i + j - 1];  // (0,1)->0, (0,2)->1, (1,2)->2
  }

  /// v^T M v
  double eval(double x, double y, double z) const {
    return d_[0] * x * x + d_[1] * y * y + d_[2] * z * z +
           2.0 * (off_[0] * x * y + off_[1] * x * z + off_[2] * y * z);
  }

  double minor1() const { return d_[0]; }
  double minor2() const { return d_[0] * d_[1] - off_[0] * off_[0]; }
  double minor3() const {
    const double a = d_[0], b = d_[1], c = d_[2];
    const double p = off_[0], q = off_[1], r = off_[2];
    return a * (b * c - r * r) - p * (p * c - r * q) + q * (p * r - b * q);
  }

  QuadraticForm3 negated() const {
    return {-d_[0], -d_[1], -d_[2], -off_[0], -off_[1], -off_[2]};
  }

  /// M - diag(a, b, b)
  QuadraticForm3 shifted(double a, double b) const {
    return {d_[0] - a, d_[1] - b, d_[2] - b, off_[0], off_[1], off_[2]};
  }

  std::array<std::array<double, 3>, 3> dense() const {
    std::array<std::array<double, 3>, 3> m{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = (*this)(i, j);
    return m;
  }

  double max_abs() const;

  bool operator==(const QuadraticForm3&) const = default;

 private:
  std::array<double, 3> d_{};
  std::array<double, 3> off_{};
};

inline double QuadraticForm3::max_abs() const {
  double m = 0;
  for (double v : d_) m = std::max(m, std::abs(v));
  for (double v : off_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace lfbsde
