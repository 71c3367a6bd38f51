#include <doctest.h>

#include <cmath>
#include <random>

#include "lfbsde/dominating.hpp"

using namespace lfbsde;

namespace {

CoeffMatrix random_matrix(std::mt19937_64& rng, double range = 5) {
  std::uniform_real_distribution<double> u(-range, range);
  std::array<double, 9> v{};
  for (double& x : v) x = u(rng);
  return CoeffMatrix::from_flat(v);
}

// F(y) = 1 + y^2: u(t) = tan(atan(h) + T - t).
CoeffMatrix riccati() { return CoeffMatrix::from_rows({1, 0, 0}, {0, 1, 0}, {0, 0, 0}); }

}  // namespace

TEST_CASE("L is (1 - s3 y) F(y)") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> y(-3, 3);
  for (int i = 0; i < 500; ++i) {
    const CoeffMatrix c = random_matrix(rng);
    const DominatingFn fn(c);
    const Cubic L = l_poly(c);
    for (int k = 0; k < 5; ++k) {
      const double v = y(rng);
      if (fn.near_singular(v, 1e-3)) continue;
      const double lhs = (1 - c.s3 * v) * fn.raw(v);
      CHECK(std::abs(lhs - L(v)) <= 1e-9 * (1 + std::abs(lhs) + L.scale() * 27));
    }
  }
}

TEST_CASE("H(y) = L(-y)") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> y(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const CoeffMatrix c = random_matrix(rng);
    const double v = y(rng);
    CHECK(h_poly(c)(v) == doctest::Approx(l_poly(c)(-v)).epsilon(1e-12));
  }
}

TEST_CASE("worked example cubics") {
  const CoeffMatrix ex2 = CoeffMatrix::from_rows({5, 3, 5}, {3, 1, -2}, {5, 2, 4});
  CHECK(l_poly(ex2) == Cubic{-8, -23, 11, 5});
  CHECK(h_poly(ex2) == Cubic{8, -23, -11, 5});
  CHECK(l_poly(ex2)(-4) > 0);
  CHECK(l_poly(ex2)(0.25) > 0);

  const CoeffMatrix ex313 = CoeffMatrix::from_rows({-2, 0, 1}, {1, -1, -2}, {0, 2, 1});
  CHECK(std::abs(f_eval(DominatingFn(ex313), -1.0) + 1.0) <= 1e-12);
  CHECK_THROWS_AS(f_eval(DominatingFn(ex313), 1.0), Error);
}

TEST_CASE("RK4 matches the tangent solution to fourth order") {
  const double T = 1, h = 0.2;
  const double exact = std::tan(std::atan(h) + T);
  double prev = 0;
  for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
    const OdeSolution s = integrate_dominating(riccati(), h, T, dt);
    REQUIRE(s.bounded());
    const double err = std::abs(s.initial_value() - exact);
    if (prev > 0) CHECK(std::log2(prev / err) >= 3.5);
    prev = err;
  }
}

TEST_CASE("grid and step") {
  const OdeSolution s = integrate_dominating(riccati(), 0, 1, 0.3);
  CHECK(s.step == doctest::Approx(0.25));
  CHECK(s.grid.size() == 5);
  CHECK(s.grid.front() == 0);
  CHECK(s.grid.back() == 1);
  CHECK(s.values.back() == 0);
  CHECK(to_csv(s).rfind("t,u,status\n", 0) == 0);
}

TEST_CASE("blow-up is located") {
  // tan blows up when T - t reaches pi/2.
  const OdeSolution s = integrate_dominating(riccati(), 0, 2, 1e-3);
  CHECK(s.status.kind == OdeStatus::Kind::BlowUp);
  CHECK(s.status.t_star == doctest::Approx(2 - M_PI / 2).epsilon(0.02));
  CHECK(s.values.size() == s.grid.size());
}

TEST_CASE("reaching the pole is reported as singular") {
  // F(y) = 1 / (1 - y), u(T) = 0: u - u^2/2 = T - t hits u = 1 at T - t = 1/2.
  const CoeffMatrix c = CoeffMatrix::from_rows({1, 0, 1}, {0, 0, 0}, {1, 0, 1});
  CHECK(DominatingFn(c).raw(0.5) == doctest::Approx(2));
  const OdeSolution s = integrate_dominating(c, 0, 1, 1e-4);
  CHECK(s.status.kind == OdeStatus::Kind::Singular);
  CHECK(s.status.t_star == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("point envelope reproduces the plain solution") {
  const CoeffMatrix c = CoeffMatrix::from_rows({-2, 0, 1}, {1, -1, -2}, {0, 2, 1});
  const EnvelopeSolution env = integrate_dominating_envelope(CoeffEnvelope::point(c, -1), 1, 1e-3);
  const OdeSolution plain = integrate_dominating(c, -1, 1, 1e-3);
  CHECK(env.well_posed());
  CHECK(env.upper.initial_value() == doctest::Approx(plain.initial_value()).epsilon(1e-12));
  CHECK(env.lower.initial_value() == doctest::Approx(plain.initial_value()).epsilon(1e-12));
}

TEST_CASE("widened envelope brackets every corner solution") {
  const CoeffMatrix c = CoeffMatrix::from_rows({-2, 0, 1}, {1, -1, -2}, {0, 2, 1});
  CoeffEnvelope env = CoeffEnvelope::point(c, -1);
  env.coeffs[0] = {-2.1, -1.9};
  env.coeffs[4] = {-1.1, -0.9};
  env.h = {-1.1, -0.9};
  const EnvelopeSolution sol = integrate_dominating_envelope(env, 1, 1e-3);
  REQUIRE(sol.well_posed());
  for (double f1 : {-2.1, -1.9}) {
    for (double b2 : {-1.1, -0.9}) {
      for (double h : {-1.1, -0.9}) {
        CoeffMatrix k = c;
        k.f1 = f1;
        k.b2 = b2;
        const double u0 = integrate_dominating(k, h, 1, 1e-3).initial_value();
        CHECK(u0 <= sol.upper.initial_value() + 1e-9);
        CHECK(u0 >= sol.lower.initial_value() - 1e-9);
      }
    }
  }
}
