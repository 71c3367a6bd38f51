#include <doctest.h>

#include <cmath>
#include <random>

#include "lfbsde/dominating.hpp"
#include "lfbsde/equivalence.hpp"

using namespace lfbsde;

namespace {

const CoeffMatrix kEx313 = CoeffMatrix::from_rows({-2, 0, 1}, {1, -1, -2}, {0, 2, 1});

CoeffMatrix random_matrix(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-10, 10);
  std::array<double, 9> v{};
  for (double& x : v) x = u(rng);
  return CoeffMatrix::from_flat(v);
}

bool same_cubic(const Cubic& a, const Cubic& b, double scale) {
  return std::abs(a.c3 - b.c3) <= 1e-10 * scale && std::abs(a.c2 - b.c2) <= 1e-10 * scale &&
         std::abs(a.c1 - b.c1) <= 1e-10 * scale && std::abs(a.c0 - b.c0) <= 1e-10 * scale;
}

}  // namespace

TEST_CASE("Girsanov-type equivalent of the worked example") {
  const auto m = equiv_B(kEx313, 1).matrix.display();
  CHECK(m == std::array<std::array<double, 3>, 3>{{{2, 0, 0}, {1, 1, -1}, {0, 2, 1}}});
  CHECK(equiv_B(kEx313, 0).matrix == kEx313);
  CHECK(equiv_C(kEx313, 0).matrix == kEx313);
}

TEST_CASE("equivalents share the dominating cubic") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> par(-10, 10);
  for (int i = 0; i < 1000; ++i) {
    const CoeffMatrix c = random_matrix(rng);
    const double p = par(rng), q = par(rng);
    const Cubic base = l_poly(c);
    for (const EquivalentMatrix& e :
         {equiv_B(c, p), equiv_C(c, q), equiv_remark35(c, EquivKind::BRemark, p),
          equiv_remark35(c, EquivKind::CRemark, q), equiv_D(c, p, q)}) {
      const Cubic l = l_poly(e.matrix);
      const double scale = std::max({1.0, base.scale(), l.scale()});
      CHECK(same_cubic(l, base, scale));
      CHECK(e.matrix.s3 == c.s3);
    }
    CHECK(equiv_D(c, p, q).matrix == equiv_C(equiv_B(c, p).matrix, q).matrix);
  }
}

TEST_CASE("written-out minors agree with the symmetrized equivalents") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> par(-10, 10);
  for (int i = 0; i < 500; ++i) {
    const CoeffMatrix c = random_matrix(rng);
    const double p = par(rng);
    const QuadraticForm3 b = symmetrize(equiv_B(c, p).matrix);
    const QuadraticForm3 k = symmetrize(equiv_C(c, p).matrix);
    const double s = 1 + std::pow(b.max_abs(), 3) + std::pow(k.max_abs(), 3);
    CHECK(std::abs(minor2_B(c, p) - b.minor2()) <= 1e-12 * s);
    CHECK(std::abs(minor3_B(c, p) - b.minor3()) <= 1e-12 * s);
    CHECK(std::abs(minor2_C(c, p) - k.minor2()) <= 1e-12 * s);
    CHECK(std::abs(minor3_C(c, p) - k.minor3()) <= 1e-12 * s);
  }
}

TEST_CASE("feasible p for the worked example") {
  const FeasibleSet set = feasible_p(kEx313, -1, SearchGrid{-5, 5, 0.01});
  CHECK(set.gate == 1);
  bool has_one = false;
  for (const FeasiblePoint& pt : set.points) {
    const double p = pt.param;
    CHECK(std::abs(pt.det2 - (4 * p - 9.0 / 4)) <= 1e-9);
    // The printed cubic boundary is 4 det3 (same sign).
    CHECK(std::abs(4 * pt.det3 - (-2 * p * p * p + 4 * p * p + 11 * p - 8)) <= 1e-9);
    CHECK(pt.det2 > 0);
    CHECK(pt.det3 > 0);
    if (std::abs(p - 1) < 1e-9) {
      has_one = true;
      CHECK(pt.verdict.well_posed());
    }
  }
  CHECK(has_one);
  // Boundary: det2 > 0 needs p > 9/16, det3 changes sign between 0.6 and 0.7.
  CHECK(set.points.front().param > 0.5625);
  CHECK(to_csv(set, "p").rfind("param,value,det2,det3,verdict\n", 0) == 0);
}

TEST_CASE("gates") {
  CHECK_THROWS_AS(feasible_p(kEx313, 1), Error);
  CoeffMatrix c = kEx313;
  c.f1 = 2;
  CHECK_NOTHROW(feasible_q(c, 1, SearchGrid{-1, 1, 0.5}));
  CHECK(feasible_q(c, 1, SearchGrid{-1, 1, 0.5}).gate == 2);
}

TEST_CASE("search grid points") {
  const auto pts = SearchGrid{-1, 1, 0.5}.points();
  CHECK(pts == std::vector<double>{-1, -0.5, 0, 0.5, 1});
  CHECK(SearchGrid{-10, 10, 0.01}.points().size() == 2001);
}
