#include "lfbsde/dominating.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lfbsde {

Cubic l_poly(const CoeffMatrix& c) {
  return {c.b3 * c.s2 - c.b2 * c.s3,
          c.b2 + c.s2 * c.f3 - c.s3 * c.f2 + c.s1 * c.b3 - c.s3 * c.b1,
          c.f2 + c.b1 + c.f3 * c.s1 - c.f1 * c.s3,
          c.f1};
}

Cubic h_poly(const CoeffMatrix& c) {
  // -(b3 s2 - b2 s3) y^3 + (b2 + s2 f3 - s3 f2 + s1 b3 - s3 b1) y^2
  //   - (f2 + b1 + f3 s1 - f1 s3) y + f1
  return {-(c.b3 * c.s2 - c.b2 * c.s3),
          c.b2 + c.s2 * c.f3 - c.s3 * c.f2 + c.s1 * c.b3 - c.s3 * c.b1,
          -(c.f2 + c.b1 + c.f3 * c.s1 - c.f1 * c.s3),
          c.f1};
}

double f_eval(const DominatingFn& d, double y) {
  if (d.near_singular(y)) {
    throw Error(ErrorKind::SingularEvaluation, "F is undefined at y = 1/s3");
  }
  return d.raw(y);
}

const char* to_string(OdeStatus::Kind kind) {
  switch (kind) {
    case OdeStatus::Kind::Bounded: return "Bounded";
    case OdeStatus::Kind::Singular: return "Singular";
    case OdeStatus::Kind::BlowUp: return "BlowUp";
  }
  return "Unknown";
}

namespace {

struct DriverValue {
  double value;
  bool singular;
};

// side(y) is the sign of the denominator 1 - s3 y: +1, -1, or 0 inside the
// singular band. The trajectory may never change side.
template <class Driver, class Side>
OdeSolution integrate_backward(Driver&& driver, Side&& side, double h, double T, double dt,
                               const OdeGuards& guards) {
  if (!(T > 0) || !std::isfinite(T)) throw Error(ErrorKind::HorizonNonPositive, "T must be positive");
  if (!(dt > 0) || !std::isfinite(dt)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  if (dt > T * (1 + 1e-12)) throw Error(ErrorKind::InvalidArgument, "dt must not exceed T");

  const double ratio = T / dt;
  auto n = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
  n = std::max<std::size_t>(n, 1);
  const double step = T / static_cast<double>(n);

  OdeSolution sol;
  sol.step = step;
  std::vector<double> rev_values;
  rev_values.reserve(n + 1);
  rev_values.push_back(h);

  auto halt = [&](OdeStatus::Kind kind, std::size_t k) {
    sol.status.kind = kind;
    sol.status.t_star = static_cast<double>(k) * step;
  };

  double u = h;
  int side0 = side(u);
  if (side0 == 0) {
    halt(OdeStatus::Kind::Singular, n);
  } else {
    for (std::size_t k = n; k-- > 0;) {
      const auto k1 = driver(u);
      const auto k2 = k1.singular ? k1 : driver(u + 0.5 * step * k1.value);
      const auto k3 = k2.singular ? k2 : driver(u + 0.5 * step * k2.value);
      const auto k4 = k3.singular ? k3 : driver(u + step * k3.value);
      if (k1.singular || k2.singular || k3.singular || k4.singular) {
        halt(OdeStatus::Kind::Singular, k);
        break;
      }
      const double next = u + step * (k1.value + 2.0 * k2.value + 2.0 * k3.value + k4.value) / 6.0;
      if (!std::isfinite(next) || std::abs(next) > guards.blow_up) {
        halt(OdeStatus::Kind::BlowUp, k);
        break;
      }
      if (side(next) != side0) {
        halt(OdeStatus::Kind::Singular, k);
        break;
      }
      u = next;
      rev_values.push_back(u);
    }
  }

  const std::size_t m = rev_values.size();
  sol.values.assign(rev_values.rbegin(), rev_values.rend());
  sol.grid.resize(m);
  for (std::size_t i = 0; i < m; ++i) sol.grid[i] = static_cast<double>(n - (m - 1) + i) * step;
  sol.grid.back() = T;
  return sol;
}

}  // namespace

OdeSolution integrate_dominating(const CoeffMatrix& c, double h, double T, double dt,
                                 const OdeGuards& guards) {
  const DominatingFn fn(c);
  auto driver = [&](double y) -> DriverValue {
    if (fn.near_singular(y, guards.singular_rel)) return {0.0, true};
    return {fn.raw(y), false};
  };
  auto side = [&](double y) -> int {
    if (fn.near_singular(y, guards.singular_rel)) return 0;
    return (1.0 - c.s3 * y) > 0 ? 1 : -1;
  };
  return integrate_backward(driver, side, h, T, dt, guards);
}

OdeSolution integrate_dominating(const LinearFBSDE& f, double dt, const OdeGuards& guards) {
  return integrate_dominating(f.coeffs, f.h, f.T, dt, guards);
}

EnvelopeSolution integrate_dominating_envelope(const CoeffEnvelope& env, double T, double dt,
                                               const OdeGuards& guards) {
  validate_envelope(env);

  // Corners over the non-degenerate coordinates only; point intervals add nothing.
  std::vector<std::size_t> free_dims;
  for (std::size_t i = 0; i < 9; ++i) {
    if (env.coeffs[i].lo != env.coeffs[i].hi) free_dims.push_back(i);
  }
  std::vector<DominatingFn> corners;
  corners.reserve(std::size_t{1} << free_dims.size());
  for (std::size_t mask = 0; mask < (std::size_t{1} << free_dims.size()); ++mask) {
    std::array<double, 9> v{};
    for (std::size_t i = 0; i < 9; ++i) v[i] = env.coeffs[i].lo;
    for (std::size_t j = 0; j < free_dims.size(); ++j) {
      if (mask & (std::size_t{1} << j)) v[free_dims[j]] = env.coeffs[free_dims[j]].hi;
    }
    corners.emplace_back(CoeffMatrix::from_flat(v));
  }

  const Interval s3 = env.coeffs[8];
  // 1 - s3 y is affine in s3, so its range over the box is spanned by the endpoints.
  auto side = [&](double y) -> int {
    const double g_lo = 1.0 - s3.lo * y, g_hi = 1.0 - s3.hi * y;
    const double band = guards.singular_rel * std::max({1.0, std::abs(s3.lo * y), std::abs(s3.hi * y)});
    if (std::min(g_lo, g_hi) > band) return 1;
    if (std::max(g_lo, g_hi) < -band) return -1;
    return 0;
  };
  auto make_driver = [&](bool upper) {
    return [&, upper](double y) -> DriverValue {
      if (side(y) == 0) return {0.0, true};
      double best = upper ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
      for (const auto& fn : corners) {
        const double v = fn.raw(y);
        best = upper ? std::max(best, v) : std::min(best, v);
      }
      return {best, false};
    };
  };

  EnvelopeSolution out;
  out.upper = integrate_backward(make_driver(true), side, env.h.hi, T, dt, guards);
  out.lower = integrate_backward(make_driver(false), side, env.h.lo, T, dt, guards);
  out.ordered = true;
  const std::size_t m = std::min(out.upper.values.size(), out.lower.values.size());
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t iu = out.upper.values.size() - 1 - i;
    const std::size_t il = out.lower.values.size() - 1 - i;
    if (out.lower.values[il] > out.upper.values[iu]) {
      out.ordered = false;
      break;
    }
  }
  return out;
}

std::string to_csv(const OdeSolution& sol) {
  std::ostringstream os;
  os.precision(17);
  os << "t,u,status\n";
  const char* status = to_string(sol.status.kind);
  for (std::size_t i = 0; i < sol.grid.size(); ++i) {
    os << sol.grid[i] << ',' << sol.values[i] << ',' << status << '\n';
  }
  return os.str();
}

}  // namespace lfbsde
