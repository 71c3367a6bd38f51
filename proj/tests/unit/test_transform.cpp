#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "lfbsde/dominating.hpp"
#include "lfbsde/solver.hpp"
#include "lfbsde/transform.hpp"

using namespace lfbsde;

namespace {

const CoeffMatrix kEx2 = CoeffMatrix::from_rows({5, 3, 5}, {3, 1, -2}, {5, 2, 4});

CoeffMatrix random_matrix(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-5, 5);
  std::array<double, 9> v{};
  for (double& x : v) x = u(rng);
  return CoeffMatrix::from_flat(v);
}

// Ito on (mX + Y, ncX + cY) with v = (X, Y, Z) = P^{-1} (X~, Y~, Z~):
//   b~ = (m b - f) P^{-1},  s~ = (m s + e3) P^{-1},  f~ = (c f - nc b) P^{-1}.
CoeffMatrix tilde_by_ito(const CoeffMatrix& c, double m, double n, double k) {
  const Eigen::RowVector3d b(c.b1, c.b2, c.b3), s(c.s1, c.s2, c.s3), f(c.f1, c.f2, c.f3), e3(0, 0, 1);
  Eigen::Matrix3d P;
  P.row(0) << m, 1, 0;
  P.row(1) << n * k, k, 0;
  P.row(2) = n * k * s + k * e3;
  const Eigen::Matrix3d Pi = P.inverse();
  const Eigen::RowVector3d bt = (m * b - f) * Pi, st = (m * s + e3) * Pi, ft = (k * f - n * k * b) * Pi;
  return CoeffMatrix::from_rows({ft(0), ft(1), ft(2)}, {bt(0), bt(1), bt(2)}, {st(0), st(1), st(2)});
}

double max_diff(const CoeffMatrix& a, const CoeffMatrix& b) {
  double d = 0;
  const auto x = a.flat(), y = b.flat();
  for (int i = 0; i < 9; ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

}  // namespace

TEST_CASE("printed formulas agree with a direct Ito derivation") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> par(-3, 3);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    const CoeffMatrix c = random_matrix(rng);
    const double m = par(rng), n = par(rng), k = par(rng);
    if (std::abs(m - n) < 0.1 || std::abs(k) < 0.1 || std::abs(1 + n * c.s3) < 0.1) continue;
    const CoeffMatrix printed = tilde_coeffs(c, TransformParams::make(m, n, k));
    const CoeffMatrix ito = tilde_by_ito(c, m, n, k);
    CHECK(max_diff(printed, ito) <= 1e-8 * (1 + ito.max_abs()));
    ++checked;
  }
  CHECK(checked > 300);
}

TEST_CASE("worked example transform") {
  const LinearFBSDE f{kEx2, -4, 1, 1};
  const TransformedSystem ts = transform_system(f, TransformParams::make(1, -0.658, 1));
  const CoeffMatrix& t = ts.tilde.coeffs;
  const CoeffMatrix printed = CoeffMatrix::from_rows({0, 0.69, -2.26}, {8.75, -5.11, 4.29}, {-3.87, 1.84, -3.06});
  CHECK(max_diff(t, printed) <= 0.01);
  CHECK(ts.tilde.h == doctest::Approx(1.55).epsilon(0.01));
  const Cubic L = lambda_poly(kEx2, ts.params);
  CHECK(L.c3 == doctest::Approx(-7.76).epsilon(0.003));
  CHECK(L.c2 == doctest::Approx(3.06).epsilon(0.005));
  CHECK(L.c1 == doctest::Approx(18.17).epsilon(0.002));
  CHECK(std::abs(L.c0) <= 0.02);
  CHECK(ts.verdict.criterion == "Prop4.2(i)");
  const auto inv = ts.params.inverse();
  CHECK(std::abs(inv[0] - 0.603) <= 1e-3);
  CHECK(std::abs(inv[1] + 0.603) <= 1e-3);
  CHECK(std::abs(inv[2] - 0.397) <= 1e-3);
  CHECK(std::abs(inv[3] - 0.603) <= 1e-3);
}

TEST_CASE("written-out cubic coefficients") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> par(-3, 3);
  for (int i = 0; i < 300; ++i) {
    const CoeffMatrix c = random_matrix(rng);
    const double m = par(rng), n = par(rng), k = par(rng);
    if (std::abs(m - n) < 0.1 || std::abs(k) < 0.1 || std::abs(1 + n * c.s3) < 0.1) continue;
    const LambdaDiagnostics d = lambda_diagnostics(c, TransformParams::make(m, n, k));
    CHECK(d.lambda0_ok);
    CHECK(d.lambda1_ok);
    CHECK(d.lambda2_corrected_ok);
    CHECK(d.lambda0 == doctest::Approx(-d.lambda0_printed));
    const LambdaDiagnostics one = lambda_diagnostics(c, TransformParams::make(m, n, 1));
    CHECK(one.lambda2_ok);
    CHECK(one.lambda2 == doctest::Approx(one.lambda2_printed));
  }
}

TEST_CASE("decoupling roots zero the transformed f1") {
  std::mt19937_64 rng(57);
  std::uniform_real_distribution<double> par(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const CoeffMatrix c = random_matrix(rng);
    for (double n : real_roots(h_poly(c))) {
      const double m = n + 1, k = 1 + std::abs(par(rng));
      if (std::abs(1 + n * c.s3) < 1e-3) continue;
      const CoeffMatrix t = tilde_coeffs(c, TransformParams::make(m, n, k));
      CHECK(std::abs(t.f1) <= 1e-8 * (1 + t.max_abs()));
    }
  }
}

TEST_CASE("scaling c rescales the second tilde coordinate") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> par(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const CoeffMatrix c = random_matrix(rng);
    const double m = par(rng), n = par(rng), k = 2.5;
    if (std::abs(m - n) < 0.1 || std::abs(1 + n * c.s3) < 0.1) continue;
    const CoeffMatrix a = tilde_coeffs(c, TransformParams::make(m, n, 1));
    const CoeffMatrix b = tilde_coeffs(c, TransformParams::make(m, n, k));
    const double tol = 1e-9 * (1 + a.max_abs() * k);
    CHECK(std::abs(b.f1 - k * a.f1) <= tol);
    CHECK(std::abs(b.f2 - a.f2) <= tol);
    CHECK(std::abs(b.f3 - a.f3) <= tol);
    CHECK(std::abs(b.b1 - a.b1) <= tol);
    CHECK(std::abs(b.b2 - a.b2 / k) <= tol);
    CHECK(std::abs(b.b3 - a.b3 / k) <= tol);
    CHECK(std::abs(b.s1 - a.s1) <= tol);
    CHECK(std::abs(b.s2 - a.s2 / k) <= tol);
    CHECK(std::abs(b.s3 - a.s3 / k) <= tol);
  }
}

TEST_CASE("transformed field is a Moebius image of the original one") {
  const LinearFBSDE f{kEx2, -4, 1, 1};
  const TransformedSystem ts = transform_system(f, TransformParams::make(1, -0.658, 1));
  const OdeSolution orig = integrate_dominating(f, 1e-3);
  const OdeSolution tilde = integrate_dominating(ts.tilde, 1e-3);
  REQUIRE(orig.bounded());
  REQUIRE(tilde.bounded());
  for (std::size_t k = 0; k < orig.values.size(); k += 100) {
    const double u = orig.values[k];
    CHECK(tilde.values[k] == doctest::Approx((-0.658 + u) / (1 + u)).epsilon(1e-8));
  }
}

TEST_CASE("field mapped back matches the field built directly") {
  const LinearFBSDE f{kEx2, -4, 1, 1};
  const TransformedSystem ts = transform_system(f, TransformParams::make(1, -0.658, 1));
  const DecouplingField direct = build_field(f, 1e-3);
  const DecouplingField back = field_in_original(ts, build_field(ts.tilde, 1e-3));
  for (std::size_t k = 0; k < direct.ode.values.size(); k += 50) {
    CHECK(back.ode.values[k] == doctest::Approx(direct.ode.values[k]).epsilon(1e-7));
    CHECK(back.z_ratio[k] == doctest::Approx(direct.z_ratio[k]).epsilon(1e-7));
  }
}

TEST_CASE("state maps are inverse to each other") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-3, 3);
  const LinearFBSDE f{kEx2, -4, 1, 1};
  const TransformedSystem ts = transform_system(f, TransformParams::make(1, -0.658, 1.7));
  for (int i = 0; i < 100; ++i) {
    const State3 s{u(rng), u(rng), u(rng)};
    const State3 r = inverse_map(ts, forward_map(ts, s));
    CHECK(r.X == doctest::Approx(s.X));
    CHECK(r.Y == doctest::Approx(s.Y));
    CHECK(r.Z == doctest::Approx(s.Z));
  }
}

TEST_CASE("closed initial condition") {
  const LinearFBSDE f{kEx2, -4, 1, 1};
  const TransformedSystem ts = transform_system(f, TransformParams::make(1, -0.658, 1));
  const double u0 = integrate_dominating(f, 1e-3).initial_value();
  const double ut0 = integrate_dominating(ts.tilde, 1e-3).initial_value();
  // X~(0) = m x + Y(0) = (m + u(0)) x
  CHECK(tilde_initial_state(ts, ut0) == doctest::Approx((1 + u0) * f.x0).epsilon(1e-8));
}

TEST_CASE("degenerate inputs") {
  const LinearFBSDE f{kEx2, -4, 1, 1};
  CHECK_THROWS_AS(TransformParams::make(1, 1, 1), Error);
  CHECK_THROWS_AS(TransformParams::make(1, 0, 0), Error);
  CHECK_THROWS_AS(transform_system(f, TransformParams::make(4, 0, 1)), Error);
}

TEST_CASE("synthesis") {
  const LinearFBSDE f{kEx2, -4, 1, 1};
  const TransformedSystem ts = synthesize_transform(f);
  CHECK(ts.verdict.well_posed());
  CHECK(std::abs(ts.tilde.coeffs.f1) <= 1e-8);
  CHECK_FALSE(ts.candidates.empty());
  CHECK(ts.candidates.back().outcome == ts.verdict.criterion);

  SynthesisOptions pinned;
  pinned.n = -0.658;
  pinned.m_grid = {1, 1, 1};
  CHECK(synthesize_transform(f, pinned).params.m == 1);

  // H(y) = y^2 + 1 has no real root.
  const LinearFBSDE g{CoeffMatrix::from_rows({1, 0, 0}, {0, 1, 0}, {0, 0, 0}), 0, 1, 1};
  SynthesisOptions strict;
  strict.strict = true;
  try {
    synthesize_transform(g, strict);
    FAIL("expected NoDecouplingRoot");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoDecouplingRoot);
  }
}
