#include <doctest.h>

#include <cmath>
#include <random>

#include "lfbsde/lq.hpp"

using namespace lfbsde;

namespace {

const LQProblem kExample{1, 1, 1, 2, 1, 2, -1, -4, 1, 1};

LQProblem random_lq(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3, 3);
  LQProblem lq{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), 1, 1};
  if (std::abs(lq.N) < 0.1) lq.N = 1;
  return lq;
}

}  // namespace

TEST_CASE("Hamiltonian system of the worked example") {
  const LinearFBSDE f = build_hamiltonian(kExample);
  CHECK(f.coeffs == CoeffMatrix::from_rows({5, 3, 5}, {3, 1, 2}, {5, 2, 4}));
  CHECK(f.h == -4);
  const OptimalControlLaw law = optimal_law(kExample);
  CHECK(law.kx == 2);
  CHECK(law.ky == 1);
  CHECK(law.kz == 2);
  CHECK_THROWS_AS(build_hamiltonian(LQProblem{1, 1, 1, 1, 1, 1, 0, 1, 1, 1}), Error);
}

TEST_CASE("closing the state and adjoint equations with the optimal law") {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 200; ++i) {
    const LQProblem lq = random_lq(rng);
    const CoeffMatrix c = build_hamiltonian(lq).coeffs;
    const OptimalControlLaw k = optimal_law(lq);
    // state: dx = (A x + B u) dt + (C x + D u) dW
    CHECK(c.b1 == doctest::Approx(lq.A + lq.B * k.kx).epsilon(1e-12));
    CHECK(c.b2 == doctest::Approx(lq.B * k.ky).epsilon(1e-12));
    CHECK(c.b3 == doctest::Approx(lq.B * k.kz).epsilon(1e-12));
    CHECK(c.s1 == doctest::Approx(lq.C + lq.D * k.kx).epsilon(1e-12));
    CHECK(c.s2 == doctest::Approx(lq.D * k.ky).epsilon(1e-12));
    CHECK(c.s3 == doctest::Approx(lq.D * k.kz).epsilon(1e-12));
    // adjoint: -dy = (A y + C z + R x + S u) dt - z dW
    CHECK(c.f1 == doctest::Approx(lq.R + lq.S * k.kx).epsilon(1e-12));
    CHECK(c.f2 == doctest::Approx(lq.A + lq.S * k.ky).epsilon(1e-12));
    CHECK(c.f3 == doctest::Approx(lq.C + lq.S * k.kz).epsilon(1e-12));
    // stationarity of the Hamiltonian in u: B y + D z + S x + N u = 0
    const double x = 0.7, y = -1.3, z = 0.4;
    const double u = k.kx * x + k.ky * y + k.kz * z;
    CHECK(std::abs(lq.B * y + lq.D * z + lq.S * x + lq.N * u) <= 1e-12 * (1 + std::abs(lq.N * u)));
  }
}

TEST_CASE("scaling the weights rescales the adjoint") {
  // (y, z) -> k (y, z): b1, s1, f2, f3 fixed; b2, b3, s2, s3 divided by k; f1, h times k.
  std::mt19937_64 rng(73);
  for (int i = 0; i < 100; ++i) {
    const LQProblem lq = random_lq(rng);
    LQProblem s = lq;
    const double k = 3.5;
    s.R *= k;
    s.S *= k;
    s.N *= k;
    s.Q *= k;
    const CoeffMatrix a = build_hamiltonian(lq).coeffs, b = build_hamiltonian(s).coeffs;
    for (int j = 0; j < 3; ++j) {
      const double w = j == 0 ? 1 : 1 / k;
      CHECK(b.b()[j] == doctest::Approx(w * a.b()[j]).epsilon(1e-12));
      CHECK(b.s()[j] == doctest::Approx(w * a.s()[j]).epsilon(1e-12));
    }
    CHECK(b.f1 == doctest::Approx(k * a.f1).epsilon(1e-12));
    CHECK(b.f2 == doctest::Approx(a.f2).epsilon(1e-12));
    CHECK(b.f3 == doctest::Approx(a.f3).epsilon(1e-12));
    CHECK(optimal_law(s).kx == doctest::Approx(optimal_law(lq).kx).epsilon(1e-12));
    CHECK(build_hamiltonian(s).h == k * lq.Q);
  }
}

TEST_CASE("printed example route") {
  LqOptions opts;
  opts.use_printed_fbsde = true;
  opts.n_paths = 500;
  opts.keep_paths = 3;
  const LqSolution sol = solve_lq(kExample, opts);
  CHECK(sol.route == "Prop4.2(i)");
  REQUIRE(sol.transform);
  CHECK(sol.transform->params.n == doctest::Approx(-0.658).epsilon(1e-3));
  const auto inv = sol.transform->params.inverse();
  CHECK(std::abs(inv[0] - 0.603) <= 1e-3);
  CHECK(std::abs(inv[2] - 0.397) <= 1e-3);
  REQUIRE(sol.chain.size() == 5);
  CHECK_FALSE(sol.chain[0].well_posed());
  CHECK_FALSE(sol.chain[2].well_posed());
  CHECK_FALSE(sol.chain[3].well_posed());
  REQUIRE(sol.diagnostics.size() == 1);
  CHECK(sol.diagnostics[0].rfind("b3:", 0) == 0);

  REQUIRE(sol.controls.size() == 3);
  const Path& p = sol.paths.paths[1];
  for (std::size_t k = 0; k < p.X.size(); k += 97) {
    CHECK(sol.controls[1][k] == doctest::Approx(2 * p.X[k] + p.Y[k] + 2 * p.Z[k]));
  }
  // Paths mapped back satisfy Y = u X with the recovered field.
  for (std::size_t k = 0; k < p.X.size(); k += 97) {
    CHECK(p.Y[k] == doctest::Approx(sol.field.ode.values[k] * p.X[k]).epsilon(1e-9));
  }
}

TEST_CASE("convex problem needs no transform") {
  const LQProblem lq{0.5, 1, 0.2, 0.3, 1, 0, 1, 1, 1, 1};
  LqOptions opts;
  opts.n_paths = 200;
  const LqSolution sol = solve_lq(lq, opts);
  CHECK_FALSE(sol.transform);
  CHECK(sol.chain.size() == 4);
  CHECK(sol.chain[3].criterion == "Cor5.2(i)");
  CHECK(residual_within_bound(sol.sim));
}

TEST_CASE("uncontrolled diffusion gives a pure state feedback") {
  const LQProblem lq{0.3, 0, 0.5, 0, 1, 0.5, 2, 1, 1, 1};
  const OptimalControlLaw law = optimal_law(lq);
  CHECK(law.ky == 0);
  CHECK(law.kz == 0);
  LqOptions opts;
  opts.n_paths = 100;
  const LqSolution sol = solve_lq(lq, opts);
  for (double k : feedback_gains(law, sol.field)) CHECK(k == law.kx);
}

TEST_CASE("solve_lq is deterministic") {
  LqOptions opts;
  opts.n_paths = 300;
  CHECK(solve_lq(kExample, opts).sim == solve_lq(kExample, opts).sim);
}

TEST_CASE("stationarity of the optimal feedback") {
  LqOptions opts;
  opts.n_paths = 10;
  const LqSolution sol = solve_lq(kExample, opts);
  const std::vector<double> gains = feedback_gains(sol.law, sol.field);

  const StationarityReport zero = stationarity_check(kExample, gains, {0.0}, default_directions(), 50, 1);
  for (const StationarityRow& row : zero.rows) CHECK(row.difference == 0);

  // The estimated derivative carries Monte Carlo noise of order 1/sqrt(paths), so
  // the eps = 1e-2 threshold needs the full path count for the square wave.
  const StationarityReport ok = stationarity_check(kExample, gains, {1e-1, 1e-2}, default_directions(), 10000, 7);
  CHECK(ok.pass);
  for (const auto& [dir, ratio] : ok.ratios) CHECK(ratio == doctest::Approx(10).epsilon(1e-6));

  std::vector<double> bad = gains;
  for (double& k : bad) k += 1;
  CHECK_FALSE(stationarity_check(kExample, bad, {1e-1, 1e-2}, default_directions(), 2000, 7).pass);
}
