#pragma once

#include <string>
#include <vector>

#include "lfbsde/core.hpp"
#include "lfbsde/criteria.hpp"

namespace lfbsde {

enum class EquivKind { B, C, BRemark, CRemark, D };

const char* to_string(EquivKind k);

/// A coefficient matrix with the same dominating function as the one it was
/// generated from.
struct EquivalentMatrix {
  EquivKind kind = EquivKind::B;
  double p = 0;  // used by B, BRemark, D
  double q = 0;  // used by C, CRemark, D
  CoeffMatrix matrix;
};

/// f3 -> f3 - p, (b1,b2,b3) -> (b1,b2,b3) + p (s1,s2,s3). This is the drift
/// change dW -> dW + p dt.
EquivalentMatrix equiv_B(const CoeffMatrix& c, double p);

/// f2 -> f2 + f3 q, b2 -> b2 + b3 q, s1 -> s1 - q, s2 -> s2 + s3 q.
EquivalentMatrix equiv_C(const CoeffMatrix& c, double q);

/// equiv_C applied to equiv_B(c, p).
EquivalentMatrix equiv_D(const CoeffMatrix& c, double p, double q);

/// Variants obtained from the b1 <-> f2 symmetry of F.
///   B-variant: f2 -> f2 + s1 p, f3 -> f3 - p, b2 -> b2 + s2 p, b3 -> b3 + s3 p.
///   C-variant: b1 -> b1 + f3 q, b2 -> b2 + b3 q, s1 -> s1 - q, s2 -> s2 + s3 q.
EquivalentMatrix equiv_remark35(const CoeffMatrix& c, EquivKind which, double param);

/// Leading 2x2 and 3x3 minors of the symmetrized B(p), evaluated from their
/// written-out entries (independent of symmetrize/equiv_B).
double minor2_B(const CoeffMatrix& c, double p);
double minor3_B(const CoeffMatrix& c, double p);
/// Same for the symmetrized C(q).
double minor2_C(const CoeffMatrix& c, double q);
double minor3_C(const CoeffMatrix& c, double q);

struct SearchGrid {
  double lo = -10;
  double hi = 10;
  double step = 0.01;

  /// lo + k step for k = 0 .. floor((hi - lo) / step + 1e-9).
  std::vector<double> points() const;
};

struct FeasiblePoint {
  double param = 0;
  double det2 = 0;
  double det3 = 0;
  Verdict verdict;  // check_monotonicity on the equivalent matrix
};

struct FeasibleSet {
  int gate = 0;  // 1: h < 0 and f1 < 0; 2: h > 0 and f1 > 0
  std::vector<FeasiblePoint> points;
};

/// Grid points where the minors of the symmetrized B(p) follow the sign pattern
/// of the active gate: det2 > 0, det3 > 0 (gate 1) or det3 < 0 (gate 2).
/// Points with |det| <= 1e-9 are excluded. Throws Error(EmptyGate).
FeasibleSet feasible_p(const CoeffMatrix& c, double h, const SearchGrid& grid = {});
FeasibleSet feasible_q(const CoeffMatrix& c, double h, const SearchGrid& grid = {});

/// CSV with header "param,value,det2,det3,verdict".
std::string to_csv(const FeasibleSet& s, const std::string& param_name);

}  // namespace lfbsde
