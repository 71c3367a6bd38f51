#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lfbsde/core.hpp"
#include "lfbsde/quadratic_form.hpp"

namespace lfbsde {

enum class Decision { WellPosed, NotDecided, ExcludedInput };

const char* to_string(Decision d);

enum class Relation { Info, Gt, Ge, Lt, Le, Eq };

const char* to_string(Relation r);

/// A named scalar fact. Relational facts read "value <rel> bound".
struct Evidence {
  std::string name;
  double value = 0;
  Relation rel = Relation::Info;
  double bound = 0;

  bool holds() const;
  bool relational() const { return rel != Relation::Info; }
  bool operator==(const Evidence&) const = default;
};

/// Outcome of a well-posedness test. For WellPosed, the relational evidence is
/// exactly the condition set of the case that fired; for NotDecided it holds at
/// least one failing condition per case.
struct Verdict {
  Decision decided = Decision::NotDecided;
  std::string criterion;
  std::vector<Evidence> evidence;

  bool well_posed() const { return decided == Decision::WellPosed; }
  const Evidence* find(const std::string& name) const;
  bool operator==(const Verdict&) const = default;
};

/// Recomputes the decision from the stored relational evidence alone.
Decision recheck(const Verdict& v);

/// Symmetric part of the displayed coefficient matrix (rows -f, b, s):
/// diag (-f1, b2, s3), off-diagonals (b1-f2)/2, (s1-f3)/2, (s2+b3)/2.
QuadraticForm3 symmetrize(const CoeffMatrix& c);

struct BetaCertificate {
  double beta1 = 0;
  double beta2 = 0;
  /// Smallest eigenvalue of N - diag(beta1, beta2, beta2); >= 0 certifies the bound.
  double lambda_min = 0;
};

/// Balanced certificate for v^T N v >= beta1 x^2 + beta2 (y^2 + z^2): the point of
/// the feasible (beta1, beta2) frontier maximizing beta1 * beta2, or an axis point
/// when the product cannot be positive. Empty when N is not positive semidefinite.
std::optional<BetaCertificate> certify_betas(const QuadraticForm3& n, double margin);

/// Largest beta1 with N - diag(beta1, beta2, beta2) positive semidefinite (or -1
/// when infeasible even at beta1 = 0).
double max_beta1(const QuadraticForm3& n, double beta2);

/// Monotonicity conditions. Case (i): the form is bounded above by
/// -beta1 x^2 - beta2 (y^2 + z^2); case (ii): bounded below by the positive
/// version. Each case accepts (beta1 > 0, beta2 >= 0) with a strict sign on h, or
/// (beta2 > 0, beta1 >= 0) with a non-strict one: h > 0 / h >= 0 for (i),
/// h < 0 / h <= 0 for (ii).
Verdict check_monotonicity(const CoeffMatrix& c, double h);

/// Necessary and sufficient test for constant coefficients, decided from the real
/// zeros of F. NotDecided carries criterion "Lemma3.8-fail".
/// Throws Error(TerminalSingular) when h = 1/s3.
Verdict check_lemma38(const LinearFBSDE& f);

/// Sufficient sign test on L(h), L(1/s3) and the leading coefficient of L.
/// The lowest-numbered firing case is reported.
Verdict check_thm39(const LinearFBSDE& f, const std::string& label = "Thm3.9");

/// Sign test on the LQ weights. Throws Error(NDegenerate) when N = 0.
Verdict check_cor52(const LQProblem& lq);

}  // namespace lfbsde
