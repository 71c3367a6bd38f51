#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lfbsde/core.hpp"
#include "lfbsde/cubic.hpp"

namespace lfbsde {

/// L(y) = (1 - s3 y) F(y): coefficients (b3 s2 - b2 s3, b2 + s2 f3 - s3 f2 + s1 b3 - s3 b1,
/// f2 + b1 + f3 s1 - f1 s3, f1).
Cubic l_poly(const CoeffMatrix& c);

/// The decoupling cubic H(y) whose real roots n zero out the transformed f1.
/// Same coefficients as L with the odd-degree signs flipped.
Cubic h_poly(const CoeffMatrix& c);

/// The dominating function
///   F(y) = f1 + f2 y + y (b1 + b2 y) + (f3 + b3 y) y (s1 + s2 y) / (1 - s3 y).
class DominatingFn {
 public:
  explicit DominatingFn(const CoeffMatrix& c) : c_(c), numerator_(l_poly(c)) {}

  const CoeffMatrix& coeffs() const { return c_; }
  const Cubic& numerator() const { return numerator_; }
  std::optional<double> singular_point() const {
    if (c_.s3 == 0.0) return std::nullopt;
    return 1.0 / c_.s3;
  }

  /// |1 - s3 y| <= rel * max(1, |s3 y|)
  bool near_singular(double y, double rel = 1e-12) const {
    return std::abs(1.0 - c_.s3 * y) <= rel * std::max(1.0, std::abs(c_.s3 * y));
  }

  /// Direct evaluation of F; no singularity check.
  double raw(double y) const {
    const CoeffMatrix& c = c_;
    return c.f1 + c.f2 * y + y * (c.b1 + c.b2 * y) +
           (c.f3 + c.b3 * y) * y * (c.s1 + c.s2 * y) / (1.0 - c.s3 * y);
  }

 private:
  CoeffMatrix c_;
  Cubic numerator_;
};

/// F(y); throws Error(SingularEvaluation) within the 1e-12 relative band of 1/s3.
double f_eval(const DominatingFn& d, double y);

struct OdeStatus {
  enum class Kind { Bounded, Singular, BlowUp };
  Kind kind = Kind::Bounded;
  /// Time at which integration stopped (NaN when Bounded).
  double t_star = std::numeric_limits<double>::quiet_NaN();

  bool bounded() const { return kind == Kind::Bounded; }
};

const char* to_string(OdeStatus::Kind kind);

/// Backward solution u of u' = -F(u), u(T) = h on a uniform ascending grid.
/// When integration halts early, grid/values hold the computed part [t_star, T].
struct OdeSolution {
  std::vector<double> grid;
  std::vector<double> values;
  OdeStatus status;
  double step = 0;

  bool bounded() const { return status.bounded(); }
  double initial_value() const { return values.front(); }
};

struct OdeGuards {
  double singular_rel = 1e-8;  // |1 - s3 u| < singular_rel * max(1, |s3 u|)
  double blow_up = 1e8;        // |u| > blow_up
};

/// Fixed-step classical RK4 integration of the dominating ODE from T down to 0.
/// The step is T / ceil(T / dt).
OdeSolution integrate_dominating(const LinearFBSDE& f, double dt, const OdeGuards& guards = {});

/// Same integration for an arbitrary coefficient matrix / terminal value / horizon.
OdeSolution integrate_dominating(const CoeffMatrix& c, double h, double T, double dt,
                                 const OdeGuards& guards = {});

struct EnvelopeSolution {
  OdeSolution upper;  // terminal h.hi, driver max over the coefficient box
  OdeSolution lower;  // terminal h.lo, driver min over the coefficient box
  bool ordered = false;
  bool well_posed() const { return upper.bounded() && lower.bounded() && ordered; }
};

/// Upper and lower solutions of the dominating ODE whose drivers are the max/min
/// of F over the corners of the coefficient box.
EnvelopeSolution integrate_dominating_envelope(const CoeffEnvelope& env, double T, double dt,
                                               const OdeGuards& guards = {});

/// CSV with header "t,u,status".
std::string to_csv(const OdeSolution& sol);

}  // namespace lfbsde
