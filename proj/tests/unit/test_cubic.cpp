#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lfbsde/core.hpp"
#include "lfbsde/cubic.hpp"

using namespace lfbsde;

TEST_CASE("roots of factored cubics") {
  // (y - 1)(y + 2)(y - 3) = y^3 - 2 y^2 - 5 y + 6
  const auto r = real_roots(Cubic{1, -2, -5, 6});
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(-2).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(1).epsilon(1e-14));
  CHECK(r[2] == doctest::Approx(3).epsilon(1e-14));
}

TEST_CASE("deflated and degenerate polynomials") {
  CHECK(real_roots(Cubic{0, 1, 0, -4}) == std::vector<double>{-2, 2});
  CHECK(real_roots(Cubic{0, 0, 2, -1}) == std::vector<double>{0.5});
  CHECK(real_roots(Cubic{0, 0, 0, 3}).empty());
  CHECK(real_roots(Cubic{1, 0, 1, 0}) == std::vector<double>{0});
  CHECK_THROWS_AS(real_roots(Cubic{}), Error);
}

TEST_CASE("double root is reported once") {
  // (y - 1)^2 (y + 1)
  const auto r = real_roots(Cubic{1, -1, -1, 1});
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(-1));
  CHECK(r[1] == doctest::Approx(1).epsilon(1e-6));
}

TEST_CASE("roots restricted to an interval") {
  const Cubic p{1, -2, -5, 6};
  CHECK(real_roots_in(p, 0, 2) == std::vector<double>{1});
  CHECK(real_roots_in(p, -INFINITY, 0).size() == 1);
  CHECK(real_roots_in(p, 3.5, INFINITY).empty());
}

TEST_CASE("random products of linear factors") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-20, 20);
  for (int i = 0; i < 2000; ++i) {
    std::array<double, 3> z{u(rng), u(rng), u(rng)};
    std::sort(z.begin(), z.end());
    if (z[1] - z[0] < 1e-3 || z[2] - z[1] < 1e-3) continue;
    double a = u(rng);
    if (std::abs(a) < 0.1) a = 1;
    const Cubic p{a, -a * (z[0] + z[1] + z[2]), a * (z[0] * z[1] + z[0] * z[2] + z[1] * z[2]),
                  -a * z[0] * z[1] * z[2]};
    const auto r = real_roots(p);
    REQUIRE(r.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(r[k] - z[k]) <= 1e-8 * (1 + std::abs(z[k])));
  }
}

TEST_CASE("evaluation helpers") {
  const Cubic p{2, -3, 0, 5};
  CHECK(p(2) == 9);
  CHECK(p.derivative(2) == 12);
  CHECK(p.scale() == 10);
  CHECK(p.degree() == 3);
  CHECK(Cubic{0, 0, 1, 0}.degree() == 1);
}
