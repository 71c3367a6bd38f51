#include "lfbsde/equivalence.hpp"

#include <cmath>
#include <sstream>

namespace lfbsde {

const char* to_string(EquivKind k) {
  switch (k) {
    case EquivKind::B: return "B";
    case EquivKind::C: return "C";
    case EquivKind::BRemark: return "BfromRemark";
    case EquivKind::CRemark: return "CfromRemark";
    case EquivKind::D: return "D";
  }
  return "?";
}

EquivalentMatrix equiv_B(const CoeffMatrix& c, double p) {
  CoeffMatrix m = c;
  m.f3 = c.f3 - p;
  m.b1 = c.b1 + c.s1 * p;
  m.b2 = c.b2 + c.s2 * p;
  m.b3 = c.b3 + c.s3 * p;
  return {EquivKind::B, p, 0, m};
}

EquivalentMatrix equiv_C(const CoeffMatrix& c, double q) {
  CoeffMatrix m = c;
  m.f2 = c.f2 + c.f3 * q;
  m.b2 = c.b2 + c.b3 * q;
  m.s1 = c.s1 - q;
  m.s2 = c.s2 + c.s3 * q;
  return {EquivKind::C, 0, q, m};
}

EquivalentMatrix equiv_D(const CoeffMatrix& c, double p, double q) {
  return {EquivKind::D, p, q, equiv_C(equiv_B(c, p).matrix, q).matrix};
}

EquivalentMatrix equiv_remark35(const CoeffMatrix& c, EquivKind which, double param) {
  CoeffMatrix m = c;
  if (which == EquivKind::BRemark || which == EquivKind::B) {
    m.f2 = c.f2 + c.s1 * param;
    m.f3 = c.f3 - param;
    m.b2 = c.b2 + c.s2 * param;
    m.b3 = c.b3 + c.s3 * param;
    return {EquivKind::BRemark, param, 0, m};
  }
  if (which == EquivKind::CRemark || which == EquivKind::C) {
    m.b1 = c.b1 + c.f3 * param;
    m.b2 = c.b2 + c.b3 * param;
    m.s1 = c.s1 - param;
    m.s2 = c.s2 + c.s3 * param;
    return {EquivKind::CRemark, 0, param, m};
  }
  throw Error(ErrorKind::InvalidArgument, "equiv_remark35: variant must be B or C");
}

namespace {

double det3(double a, double b, double c, double p, double q, double r) {
  // symmetric [[a,p,q],[p,b,r],[q,r,c]]
  return a * (b * c - r * r) - p * (p * c - r * q) + q * (p * r - b * q);
}

}  // namespace

double minor2_B(const CoeffMatrix& c, double p) {
  const double off = (c.b1 - c.f2 + c.s1 * p) / 2;
  return -c.f1 * (c.b2 + c.s2 * p) - off * off;
}

double minor3_B(const CoeffMatrix& c, double p) {
  return det3(-c.f1, c.b2 + c.s2 * p, c.s3, (c.b1 - c.f2 + c.s1 * p) / 2, (c.s1 - c.f3 + p) / 2,
              (c.s2 + c.b3 + c.s3 * p) / 2);
}

double minor2_C(const CoeffMatrix& c, double q) {
  const double off = (c.b1 - c.f2 - c.f3 * q) / 2;
  return -c.f1 * (c.b2 + c.b3 * q) - off * off;
}

double minor3_C(const CoeffMatrix& c, double q) {
  return det3(-c.f1, c.b2 + c.b3 * q, c.s3, (c.b1 - c.f2 - c.f3 * q) / 2, (c.s1 - c.f3 - q) / 2,
              (c.b3 + c.s2 + c.s3 * q) / 2);
}

std::vector<double> SearchGrid::points() const {
  if (!(step > 0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
    throw Error(ErrorKind::InvalidArgument, "search grid needs lo <= hi and step > 0");
  }
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n + 1));
  for (long k = 0; k <= n; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

namespace {

int gate_of(const CoeffMatrix& c, double h) {
  if (h < 0 && c.f1 < 0) return 1;
  if (h > 0 && c.f1 > 0) return 2;
  return 0;
}

template <class Minor2, class Minor3, class Make>
FeasibleSet scan(const CoeffMatrix& c, double h, const SearchGrid& grid, Minor2 m2, Minor3 m3, Make make) {
  const int gate = gate_of(c, h);
  if (gate == 0) {
    throw Error(ErrorKind::EmptyGate, "needs h < 0 and f1 < 0, or h > 0 and f1 > 0");
  }
  constexpr double band = 1e-9;
  FeasibleSet out{gate, {}};
  for (double x : grid.points()) {
    const double d2 = m2(c, x);
    const double d3 = m3(c, x);
    if (std::abs(d2) <= band || std::abs(d3) <= band) continue;
    const bool ok = d2 > 0 && (gate == 1 ? d3 > 0 : d3 < 0);
    if (!ok) continue;
    out.points.push_back({x, d2, d3, check_monotonicity(make(c, x).matrix, h)});
  }
  return out;
}

}  // namespace

FeasibleSet feasible_p(const CoeffMatrix& c, double h, const SearchGrid& grid) {
  return scan(c, h, grid, minor2_B, minor3_B, equiv_B);
}

FeasibleSet feasible_q(const CoeffMatrix& c, double h, const SearchGrid& grid) {
  return scan(c, h, grid, minor2_C, minor3_C, equiv_C);
}

std::string to_csv(const FeasibleSet& s, const std::string& param_name) {
  std::ostringstream out;
  out.precision(17);
  out << "param,value,det2,det3,verdict\n";
  for (const auto& pt : s.points) {
    out << param_name << ',' << pt.param << ',' << pt.det2 << ',' << pt.det3 << ','
        << (pt.verdict.well_posed() ? pt.verdict.criterion : std::string(to_string(pt.verdict.decided))) << '\n';
  }
  return out.str();
}

}  // namespace lfbsde
