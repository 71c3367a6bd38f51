#include "lfbsde/cubic.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "lfbsde/core.hpp"

namespace lfbsde {

double Cubic::scale() const { return std::abs(c3) + std::abs(c2) + std::abs(c1) + std::abs(c0); }

int Cubic::degree() const {
  if (c3 != 0.0) return 3;
  if (c2 != 0.0) return 2;
  if (c1 != 0.0) return 1;
  if (c0 != 0.0) return 0;
  return -1;
}

namespace {

// Bisection on a bracket with f(lo) and f(hi) of opposite sign, run until the
// bracket cannot shrink any further in double precision.
double bisect(const Cubic& p, double lo, double hi) {
  double flo = p(lo);
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fmid = p(mid);
    if (fmid == 0.0) return mid;
    if ((fmid < 0) == (flo < 0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return std::abs(p(lo)) <= std::abs(p(hi)) ? lo : hi;
}

// Critical points of p (roots of p'), ascending. p' has degree <= 2.
std::vector<double> critical_points(const Cubic& p) {
  const double a = 3.0 * p.c3, b = 2.0 * p.c2, c = p.c1;
  std::vector<double> out;
  if (a == 0.0) {
    if (b != 0.0) out.push_back(-c / b);
    return out;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0) return out;
  const double sq = std::sqrt(disc);
  const double qq = -0.5 * (b + std::copysign(sq, b));
  double r1 = qq / a;
  double r2 = qq != 0.0 ? c / qq : -b / (2.0 * a);
  if (r1 > r2) std::swap(r1, r2);
  out.push_back(r1);
  if (r2 != r1) out.push_back(r2);
  return out;
}

}  // namespace

std::vector<double> real_roots(const Cubic& p, double tol) {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "real_roots: tol must be positive");
  const int deg = p.degree();
  if (deg < 0) throw Error(ErrorKind::ZeroPolynomial, "real_roots: every coefficient is zero");
  if (deg == 0) return {};

  const std::array<double, 4> coeffs = {p.c3, p.c2, p.c1, p.c0};
  const double lead = coeffs[3 - deg];
  double max_rest = 0;
  for (int i = 4 - deg; i < 4; ++i) max_rest = std::max(max_rest, std::abs(coeffs[i]));
  const double bound = 1.0 + max_rest / std::abs(lead);

  // Break points: -R, critical points inside (-R, R), R. p is monotone between
  // consecutive break points, so each piece holds at most one simple root.
  std::vector<double> breaks{-bound};
  for (double c : critical_points(p)) {
    if (c > -bound && c < bound) breaks.push_back(c);
  }
  breaks.push_back(bound);

  const double accept = tol * p.scale();
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i], hi = breaks[i + 1];
    const double flo = p(lo), fhi = p(hi);
    if (flo == 0.0) {
      roots.push_back(lo);
    } else if ((flo < 0) != (fhi < 0) && fhi != 0.0) {
      roots.push_back(bisect(p, lo, hi));
    }
  }
  // Touching (even multiplicity) roots sit at critical points without a sign change.
  for (std::size_t i = 1; i + 1 < breaks.size(); ++i) {
    if (std::abs(p(breaks[i])) <= accept) roots.push_back(breaks[i]);
  }
  if (p(bound) == 0.0) roots.push_back(bound);

  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double r : roots) {
    if (!merged.empty() && std::abs(r - merged.back()) <= 1e-9 * std::max(1.0, std::abs(r))) {
      if (std::abs(p(r)) < std::abs(p(merged.back()))) merged.back() = r;
    } else {
      merged.push_back(r);
    }
  }
  return merged;
}

std::vector<double> real_roots_in(const Cubic& p, double lo, double hi, double tol) {
  std::vector<double> out;
  for (double r : real_roots(p, tol)) {
    if (r >= lo && r <= hi) out.push_back(r);
  }
  return out;
}

}  // namespace lfbsde
