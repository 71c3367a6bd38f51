#include "lfbsde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lfbsde {

DecouplingField make_field(const CoeffMatrix& c, OdeSolution ode) {
  DecouplingField field;
  field.z_ratio.reserve(ode.values.size());
  for (double u : ode.values) field.z_ratio.push_back(u * (c.s1 + c.s2 * u) / (1.0 - c.s3 * u));
  field.ode = std::move(ode);
  return field;
}

DecouplingField build_field(const LinearFBSDE& f, double dt) {
  OdeSolution ode = integrate_dominating(f, dt);
  if (!ode.bounded()) {
    throw Error(ErrorKind::NotWellPosedNumerically, std::string("dominating ODE ") + to_string(ode.status.kind) +
                                                        " at t = " + std::to_string(ode.status.t_star));
  }
  DecouplingField field = make_field(f.coeffs, std::move(ode));
  for (double z : field.z_ratio) {
    if (!std::isfinite(z)) throw Error(ErrorKind::NotWellPosedNumerically, "non-finite z ratio");
  }
  return field;
}

PathRng::PathRng(std::uint64_t seed, std::uint64_t path) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
  gen_.seed(seq);
}

std::vector<double> brownian_increments(std::uint64_t seed, std::uint64_t path, std::size_t n, double dt) {
  PathRng rng(seed, path);
  const double sq = std::sqrt(dt);
  std::vector<double> dw(n);
  for (auto& w : dw) w = rng.increment(sq);
  return dw;
}

namespace {

class Accumulator {
 public:
  void add(double v) {
    sum_ += v;
    sum_sq_ += v * v;
    sum_abs_ += std::abs(v);
    max_abs_ = std::max(max_abs_, std::abs(v));
    ++n_;
  }
  Stats stats() const {
    Stats s;
    if (n_ == 0) return s;
    const double n = static_cast<double>(n_);
    s.mean = sum_ / n;
    s.mean_abs = sum_abs_ / n;
    s.max_abs = max_abs_;
    s.variance = n > 1 ? std::max(0.0, (sum_sq_ - n * s.mean * s.mean) / (n - 1)) : 0.0;
    return s;
  }

 private:
  double sum_ = 0, sum_sq_ = 0, sum_abs_ = 0, max_abs_ = 0;
  std::size_t n_ = 0;
};

constexpr double kPathBlowUp = 1e12;

}  // namespace

SimResult simulate(const LinearFBSDE& f, const DecouplingField& field, std::size_t n_paths, std::uint64_t seed,
                   std::size_t keep_paths) {
  const CoeffMatrix& c = f.coeffs;
  const std::vector<double>& u = field.ode.values;
  const std::vector<double>& zr = field.z_ratio;
  const std::size_t n = field.steps();
  const double dt = field.step();
  const double sq = std::sqrt(dt);

  // Per-step coefficients of the closed forward SDE.
  std::vector<double> drift(n), vol(n);
  for (std::size_t k = 0; k < n; ++k) {
    drift[k] = c.b1 + c.b2 * u[k] + c.b3 * zr[k];
    vol[k] = c.s1 + c.s2 * u[k] + c.s3 * zr[k];
  }

  SimResult out;
  out.n_paths = n_paths;
  out.dt = dt;
  out.seed = seed;
  out.kept.grid = field.ode.grid;
  Accumulator term, bsde, xt, y0;
  double scale_sum = 0;

  for (std::size_t p = 0; p < n_paths; ++p) {
    PathRng rng(seed, p);
    const bool keep = p < keep_paths;
    Path path;
    if (keep) {
      path.X.reserve(n + 1);
      path.Y.reserve(n + 1);
      path.Z.reserve(n + 1);
    }
    double x = f.x0;
    double max_x = std::abs(x);
    double drift_sum = 0, ito_sum = 0;
    bool blown = false;
    for (std::size_t k = 0; k < n; ++k) {
      const double y = u[k] * x;
      const double z = zr[k] * x;
      const double dw = rng.increment(sq);
      if (keep) {
        path.X.push_back(x);
        path.Y.push_back(y);
        path.Z.push_back(z);
      }
      drift_sum += (c.f1 * x + c.f2 * y + c.f3 * z) * dt;
      ito_sum += z * dw;
      x += drift[k] * x * dt + vol[k] * x * dw;
      max_x = std::max(max_x, std::abs(x));
      if (!(std::abs(x) <= kPathBlowUp)) {
        blown = true;
        break;
      }
    }
    if (blown) {
      ++out.blown_up;
      continue;
    }
    const double yT = u[n] * x;
    if (keep) {
      path.X.push_back(x);
      path.Y.push_back(yT);
      path.Z.push_back(zr[n] * x);
      out.kept.paths.push_back(std::move(path));
    }
    term.add(yT - f.h * x);
    bsde.add(u[0] * f.x0 - (f.h * x + drift_sum - ito_sum));
    xt.add(x);
    y0.add(u[0] * f.x0);
    scale_sum += max_x;
  }
  out.terminal_residual = term.stats();
  out.bsde_residual = bsde.stats();
  out.x_terminal = xt.stats();
  out.y_initial = y0.stats();
  const std::size_t ok = n_paths - out.blown_up;
  out.path_scale = ok > 0 ? scale_sum / static_cast<double>(ok) : 0.0;
  return out;
}

namespace {

double bound_of(const SimResult& sr) { return 5.0 * (1.0 + sr.path_scale) * std::sqrt(sr.dt); }

}  // namespace

bool residual_within_bound(const SimResult& sr) {
  return sr.blown_up == 0 && sr.bsde_residual.mean_abs <= bound_of(sr);
}

BsdeReport verify_bsde(const SimResult& coarse, const SimResult& fine) {
  BsdeReport r;
  r.residual_coarse = coarse.bsde_residual.mean_abs;
  r.residual_fine = fine.bsde_residual.mean_abs;
  r.bound_coarse = bound_of(coarse);
  r.bound_fine = bound_of(fine);
  r.within_bound = residual_within_bound(coarse) && residual_within_bound(fine);
  if (r.residual_coarse == 0.0 && r.residual_fine == 0.0) {
    r.ratio = 1.0;
    r.converging = true;
  } else {
    r.ratio = r.residual_fine > 0 ? r.residual_coarse / r.residual_fine : INFINITY;
    r.converging = r.ratio >= 1.2;
  }
  return r;
}

BsdeReport verify_instance(const LinearFBSDE& f, double dt, std::size_t n_paths, std::uint64_t seed) {
  const SimResult coarse = simulate(f, build_field(f, 2 * dt), n_paths, seed);
  const SimResult fine = simulate(f, build_field(f, dt), n_paths, seed);
  return verify_bsde(coarse, fine);
}

TransformedSolution solve_transformed(const TransformedSystem& ts, double dt, std::size_t n_paths,
                                      std::uint64_t seed, std::size_t keep_paths) {
  TransformedSolution sol;
  sol.tilde = ts.tilde;
  sol.field = build_field(sol.tilde, dt);
  sol.tilde.x0 = tilde_initial_state(ts, sol.field.ode.initial_value());
  sol.tilde_result = simulate(sol.tilde, sol.field, n_paths, seed, keep_paths);
  sol.original_paths = invert_solution(ts, sol.tilde_result.kept);
  return sol;
}

DecouplingField field_in_original(const TransformedSystem& ts, const DecouplingField& tilde_field) {
  DecouplingField out;
  out.ode.grid = tilde_field.ode.grid;
  out.ode.status = tilde_field.ode.status;
  out.ode.step = tilde_field.ode.step;
  const std::size_t n = tilde_field.ode.values.size();
  out.ode.values.resize(n);
  out.z_ratio.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const State3 s = inverse_map(ts, {1.0, tilde_field.ode.values[k], tilde_field.z_ratio[k]});
    out.ode.values[k] = s.Y / s.X;
    out.z_ratio[k] = s.Z / s.X;
  }
  return out;
}

std::string to_csv(const PathEnsemble& paths) {
  std::ostringstream out;
  out.precision(17);
  out << "path_id,t,X,Y,Z\n";
  for (std::size_t p = 0; p < paths.paths.size(); ++p) {
    const Path& path = paths.paths[p];
    for (std::size_t k = 0; k < path.X.size(); ++k) {
      out << p << ',' << paths.grid[k] << ',' << path.X[k] << ',' << path.Y[k] << ',' << path.Z[k] << '\n';
    }
  }
  return out.str();
}

}  // namespace lfbsde
