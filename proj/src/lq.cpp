#include "lfbsde/lq.hpp"

#include <algorithm>
#include <cmath>

#include "lfbsde/dominating.hpp"

namespace lfbsde {

namespace {

void require_invertible(const LQProblem& lq) {
  if (lq.N == 0.0) throw Error(ErrorKind::NDegenerate, "N must be non-zero");
}

}  // namespace

LinearFBSDE build_hamiltonian(const LQProblem& lq) {
  require_invertible(lq);
  const double ni = 1.0 / lq.N;
  LinearFBSDE f;
  CoeffMatrix& c = f.coeffs;
  c.b1 = lq.A - lq.B * ni * lq.S;
  c.b2 = -lq.B * ni * lq.B;
  c.b3 = -lq.B * ni * lq.D;
  c.s1 = lq.C - lq.D * ni * lq.S;
  c.s2 = -lq.D * ni * lq.B;
  c.s3 = -lq.D * ni * lq.D;
  c.f1 = lq.R - lq.S * ni * lq.S;
  c.f2 = lq.A - lq.S * ni * lq.B;
  c.f3 = lq.C - lq.S * ni * lq.D;
  f.h = lq.Q;
  f.x0 = lq.x0;
  f.T = lq.T;
  return f;
}

OptimalControlLaw optimal_law(const LQProblem& lq) {
  require_invertible(lq);
  return {-lq.S / lq.N, -lq.B / lq.N, -lq.D / lq.N};
}

LinearFBSDE printed_example_fbsde(const LQProblem& lq) {
  return {CoeffMatrix::from_rows({5, 3, 5}, {3, 1, -2}, {5, 2, 4}), -4.0, lq.x0, lq.T};
}

std::vector<std::string> construction_discrepancies(const LQProblem& lq, const LinearFBSDE& used) {
  static constexpr const char* names[9] = {"f1", "f2", "f3", "b1", "b2", "b3", "s1", "s2", "s3"};
  const LinearFBSDE built = build_hamiltonian(lq);
  const auto a = used.coeffs.flat();
  const auto b = built.coeffs.flat();
  std::vector<std::string> out;
  auto note = [&](const std::string& name, double u, double v) {
    if (u != v) out.push_back(name + ": used " + std::to_string(u) + ", built from LQ data " + std::to_string(v));
  };
  for (std::size_t i = 0; i < 9; ++i) note(names[i], a[i], b[i]);
  note("h", used.h, built.h);
  return out;
}

SynthesisOptions printed_example_synthesis(const LinearFBSDE& f) {
  SynthesisOptions opts;
  const Cubic hp = h_poly(f.coeffs);
  const std::vector<double> roots = hp.is_zero() ? std::vector<double>{} : real_roots(hp);
  if (!roots.empty()) {
    opts.n = *std::min_element(roots.begin(), roots.end(),
                               [](double a, double b) { return std::abs(a + 0.658) < std::abs(b + 0.658); });
  }
  opts.m_grid = {1.0, 1.0, 1.0};
  opts.c_grid = {1.0};
  return opts;
}

std::vector<double> feedback_gains(const OptimalControlLaw& law, const DecouplingField& field) {
  std::vector<double> k(field.ode.values.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    k[i] = law.kx + law.ky * field.ode.values[i] + law.kz * field.z_ratio[i];
  }
  return k;
}

LqSolution solve_lq(const LQProblem& raw, const LqOptions& opts) {
  const LQProblem lq = validate_lq(raw);
  LqSolution sol;
  sol.law = optimal_law(lq);
  sol.fbsde = opts.use_printed_fbsde ? printed_example_fbsde(lq) : build_hamiltonian(lq);
  for (const std::string& d : construction_discrepancies(lq, sol.fbsde)) sol.diagnostics.push_back(d);

  const Verdict mono = check_monotonicity(sol.fbsde.coeffs, sol.fbsde.h);
  const Verdict l38 = check_lemma38(sol.fbsde);
  const Verdict t39 = check_thm39(sol.fbsde);
  const Verdict c52 = check_cor52(lq);
  sol.chain = {mono, l38, t39, c52};

  auto solve_direct = [&](const std::string& route) {
    sol.route = route;
    sol.field = build_field(sol.fbsde, opts.dt);
    sol.sim = simulate(sol.fbsde, sol.field, opts.n_paths, opts.seed, opts.keep_paths);
    sol.paths = sol.sim.kept;
  };

  if (mono.well_posed()) {
    solve_direct(mono.criterion);
  } else if (t39.well_posed()) {
    solve_direct(t39.criterion);
  } else if (c52.well_posed()) {
    solve_direct(c52.criterion);
  } else {
    SynthesisOptions syn = opts.use_printed_fbsde ? printed_example_synthesis(sol.fbsde) : opts.synthesis;
    std::optional<TransformedSystem> ts;
    try {
      ts = synthesize_transform(sol.fbsde, syn);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoTransformFound && e.kind() != ErrorKind::NoDecouplingRoot) throw;
      sol.diagnostics.push_back(std::string("transform search: ") + e.what());
    }
    if (ts) {
      sol.chain.push_back(ts->verdict);
      sol.route = ts->verdict.criterion;
      const TransformedSolution tsol = solve_transformed(*ts, opts.dt, opts.n_paths, opts.seed, opts.keep_paths);
      sol.sim = tsol.tilde_result;
      sol.field = field_in_original(*ts, tsol.field);
      sol.paths = tsol.original_paths;
      sol.transform = std::move(ts);
    } else if (l38.well_posed()) {
      solve_direct(l38.criterion);
    } else {
      throw Error(ErrorKind::Unsolvable, "no criterion fired and no transform was found");
    }
  }

  for (const Path& p : sol.paths.paths) {
    std::vector<double> u(p.X.size());
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = sol.law.kx * p.X[k] + sol.law.ky * p.Y[k] + sol.law.kz * p.Z[k];
    sol.controls.push_back(std::move(u));
  }
  return sol;
}

std::vector<Direction> default_directions() {
  return {
      {"v=1", [](double, double) { return 1.0; }},
      {"v=t/T", [](double t, double T) { return t / T; }},
      {"square", [](double t, double T) { return t < 0.5 * T ? 1.0 : -1.0; }},
  };
}

StationarityReport stationarity_check(const LQProblem& lq, const std::vector<double>& gains,
                                      const std::vector<double>& eps, const std::vector<Direction>& directions,
                                      std::size_t n_paths, std::uint64_t seed) {
  if (gains.size() < 2) throw Error(ErrorKind::InvalidArgument, "gain schedule needs at least one step");
  const std::size_t n = gains.size() - 1;
  const double dt = lq.T / static_cast<double>(n);
  const double sq = std::sqrt(dt);

  // Perturbed systems in the order (direction, eps, sign).
  struct Perturbation {
    std::size_t dir;
    double amount;  // +-eps
  };
  std::vector<Perturbation> perts;
  for (std::size_t d = 0; d < directions.size(); ++d) {
    for (double e : eps) {
      perts.push_back({d, e});
      perts.push_back({d, -e});
    }
  }
  std::vector<std::vector<double>> v(directions.size(), std::vector<double>(n));
  for (std::size_t d = 0; d < directions.size(); ++d) {
    for (std::size_t k = 0; k < n; ++k) v[d][k] = directions[d].v(static_cast<double>(k) * dt, lq.T);
  }

  auto running = [&](double x, double u) { return 0.5 * (lq.R * x * x + 2 * lq.S * u * x + lq.N * u * u) * dt; };

  double j0_sum = 0;
  std::vector<double> j_sum(perts.size(), 0.0);
  std::vector<double> xs(perts.size());
  std::vector<double> cost(perts.size());
  for (std::size_t p = 0; p < n_paths; ++p) {
    PathRng rng(seed, p);
    double x = lq.x0;
    double c0 = 0;
    std::fill(xs.begin(), xs.end(), lq.x0);
    std::fill(cost.begin(), cost.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double dw = rng.increment(sq);
      const double u = gains[k] * x;
      for (std::size_t j = 0; j < perts.size(); ++j) {
        const double uj = u + perts[j].amount * v[perts[j].dir][k];
        const double xj = xs[j];
        cost[j] += running(xj, uj);
        xs[j] = xj + (lq.A * xj + lq.B * uj) * dt + (lq.C * xj + lq.D * uj) * dw;
      }
      c0 += running(x, u);
      x += (lq.A * x + lq.B * u) * dt + (lq.C * x + lq.D * u) * dw;
    }
    j0_sum += c0 + 0.5 * lq.Q * x * x;
    for (std::size_t j = 0; j < perts.size(); ++j) j_sum[j] += cost[j] + 0.5 * lq.Q * xs[j] * xs[j];
  }

  const double np = static_cast<double>(n_paths);
  StationarityReport rep;
  rep.j0 = j0_sum / np;
  rep.pass = true;
  for (std::size_t j = 0; j < perts.size(); j += 2) {
    StationarityRow row;
    row.direction = directions[perts[j].dir].name;
    row.eps = perts[j].amount;
    row.j_plus = j_sum[j] / np;
    row.j_minus = j_sum[j + 1] / np;
    row.difference = std::abs(row.j_plus - row.j_minus);
    row.derivative = row.eps != 0.0 ? row.difference / (2 * row.eps) : 0.0;
    row.threshold = 10.0 * row.eps * std::max(1.0, std::abs(rep.j0));
    row.pass = row.derivative <= row.threshold;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  for (std::size_t d = 0; d < directions.size(); ++d) {
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
      const StationarityRow& a = rep.rows[d * eps.size() + i];
      const StationarityRow& b = rep.rows[d * eps.size() + i + 1];
      if (b.difference == 0.0) continue;
      const double ratio = a.difference / b.difference;
      rep.ratios.push_back({directions[d].name, ratio});
    }
  }
  return rep;
}

}  // namespace lfbsde
