#pragma once

#include <vector>

namespace lfbsde {

/// Real polynomial c3 y^3 + c2 y^2 + c1 y + c0.
struct Cubic {
  double c3 = 0, c2 = 0, c1 = 0, c0 = 0;

  /// Horner evaluation ((c3 y + c2) y + c1) y + c0.
  double operator()(double y) const { return ((c3 * y + c2) * y + c1) * y + c0; }
  double derivative(double y) const { return (3.0 * c3 * y + 2.0 * c2) * y + c1; }

  /// |c3| + |c2| + |c1| + |c0|
  double scale() const;
  int degree() const;
  bool is_zero() const { return degree() < 0; }

  bool operator==(const Cubic&) const = default;
};

/// Ascending real roots of p. Leading zero coefficients are deflated, real roots
/// are isolated on monotone pieces of [-R, R] (Cauchy bound) and refined by
/// bisection to full double resolution. Roots closer than 1e-9 are merged. Touching roots
/// at critical points are accepted when |p| <= tol * scale.
///
/// Throws Error(ZeroPolynomial) when every coefficient is zero.
std::vector<double> real_roots(const Cubic& p, double tol = 1e-12);

/// Roots of p inside the closed interval [lo, hi] (either bound may be infinite).
std::vector<double> real_roots_in(const Cubic& p, double lo, double hi, double tol = 1e-12);

}  // namespace lfbsde
