#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lfbsde/core.hpp"
#include "lfbsde/criteria.hpp"
#include "lfbsde/cubic.hpp"
#include "lfbsde/equivalence.hpp"

namespace lfbsde {

/// (X~, Y~) = A (X, Y) with A = (m, 1; n c, c).
struct TransformParams {
  double m = 1, n = 0, c = 1;

  /// Throws Error(DegenerateTransform) when c (m - n) vanishes relative to
  /// 1e-10 max(|m|, |n|, 1) |c|.
  static TransformParams make(double m, double n, double c);

  double a11() const { return m; }
  double a12() const { return 1.0; }
  double a21() const { return n * c; }
  double a22() const { return c; }
  double det() const { return m * c - n * c; }
  /// A^{-1} row-major.
  std::array<double, 4> inverse() const;
};

/// Tilde coefficients by direct substitution into the nine transformation formulas.
/// Throws Error(DegenerateTransform) when |A| = 0 or a22 + a21 s3 = 0.
CoeffMatrix tilde_coeffs(const CoeffMatrix& c, const TransformParams& p);

/// (a21 + a22 h) / (a11 + a12 h); throws Error(TerminalDegenerate) when
/// |m + h| <= 1e-9.
double tilde_terminal(double h, const TransformParams& p);

/// l_poly of the tilde coefficients.
Cubic lambda_poly(const CoeffMatrix& c, const TransformParams& p);

/// Written-out closed forms for the tilde cubic, computed from the original
/// coefficients only, next to the direct construction.
struct LambdaDiagnostics {
  Cubic direct;
  double lambda0 = 0;          // H(m) / (c^2 (n - m)(1 + n s3))
  double lambda0_printed = 0;  // the same with the numerator sign of the printed form
  double lambda1_printed = 0;
  double lambda2_printed = 0;
  /// lambda2_printed with (n - m)(1 + n s3) in both denominators; agrees with the
  /// printed form when c = 1.
  double lambda2 = 0;
  bool lambda0_ok = false;
  bool lambda1_ok = false;
  bool lambda2_ok = false;  // printed form
  bool lambda2_corrected_ok = false;
};

LambdaDiagnostics lambda_diagnostics(const CoeffMatrix& c, const TransformParams& p);

struct Candidate {
  double m = 0, n = 0, c = 0;
  std::string outcome;  // criterion that fired, "NotDecided", or the rejection reason
};

struct TransformedSystem {
  TransformParams params;
  LinearFBSDE original;
  /// Tilde coefficients, h~ and T. x0 holds the explicit part (|A|/a22) x of the
  /// initial condition; see tilde_initial_state.
  LinearFBSDE tilde;
  /// Z~ = z_map . (X, Y, Z) = (a21 s1, a21 s2, a21 s3 + a22).
  std::array<double, 3> z_map{};
  /// X~(0) = first * x + second * Y~(0) = (|A|/a22, a12/a22).
  std::array<double, 2> x0_relation{};
  Verdict verdict;
  std::vector<Candidate> candidates;
};

/// Builds the transformed system for fixed parameters and runs check_prop42 on it.
TransformedSystem transform_system(const LinearFBSDE& f, const TransformParams& p);

/// check_thm39 applied to a transformed system; labels read "Prop4.2(i..iv)".
Verdict check_prop42(const LinearFBSDE& tilde);

/// Closes the implicit initial condition with Y~(0) = u~(0) X~(0):
/// X~(0) = (|A|/a22) x / (1 - (a12/a22) u~(0)). Throws Error(DegenerateTransform)
/// when the denominator is within 1e-9 of 0.
double tilde_initial_state(const TransformedSystem& ts, double u0);

struct SynthesisOptions {
  bool prefer_decoupling = true;
  /// With prefer_decoupling, fail with NoDecouplingRoot instead of scanning n.
  bool strict = false;
  SearchGrid m_grid{-5, 5, 0.1};
  std::vector<double> c_grid{1.0};
  /// Restrict n to this value (must be finite).
  std::optional<double> n;
};

/// n runs over the real roots of h_poly (ascending |n|, negative first on ties),
/// then m over m_grid (skipping |m - n| < 0.05 and m + h = 0) and c over c_grid.
/// Candidates with |s3~| < 1e-9 are rejected. Returns the first candidate whose
/// Prop 4.2 verdict is WellPosed, with every tried candidate logged.
/// Throws Error(NoTransformFound) or Error(NoDecouplingRoot).
TransformedSystem synthesize_transform(const LinearFBSDE& f, const SynthesisOptions& opts = {});

struct State3 {
  double X = 0, Y = 0, Z = 0;
};

/// (X, Y, Z) -> (X~, Y~, Z~).
State3 forward_map(const TransformedSystem& ts, const State3& s);
/// (X~, Y~, Z~) -> (X, Y, Z): (X, Y) = A^{-1} (X~, Y~), then
/// Z = (Z~ - n c s1 X - n c s2 Y) / (n c s3 + c).
State3 inverse_map(const TransformedSystem& ts, const State3& s);

struct Path {
  std::vector<double> X, Y, Z;
};

struct PathEnsemble {
  std::vector<double> grid;
  std::vector<Path> paths;
};

PathEnsemble invert_solution(const TransformedSystem& ts, const PathEnsemble& tilde_paths);

}  // namespace lfbsde
