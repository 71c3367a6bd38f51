#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace lfbsde {

/// Failure categories raised across the library. Legitimate "not well-posed"
/// outcomes are reported through Verdict / OdeStatus values, not through these.
enum class ErrorKind {
  NonFinite,
  HorizonNonPositive,
  TerminalSingular,
  SyntaxError,
  MissingField,
  UnknownField,
  TypeMismatch,
  ZeroPolynomial,
  SingularEvaluation,
  IntervalInvalid,
  NDegenerate,
  EmptyGate,
  DegenerateTransform,
  TerminalDegenerate,
  NoTransformFound,
  NoDecouplingRoot,
  NotWellPosedNumerically,
  InvalidArgument,
  Unsolvable,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct Violation {
  ErrorKind kind;
  std::string field;
};

/// Raised by validation with every violated invariant, not just the first one.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// The nine scalar coefficients of a linear FBSDE
///
///   dX = (b1 X + b2 Y + b3 Z) dt + (s1 X + s2 Y + s3 Z) dW
///  -dY = (f1 X + f2 Y + f3 Z) dt - Z dW
///
/// The "displayed" coefficient matrix has rows (-f; b; s).
struct CoeffMatrix {
  double f1 = 0, f2 = 0, f3 = 0;
  double b1 = 0, b2 = 0, b3 = 0;
  double s1 = 0, s2 = 0, s3 = 0;

  static CoeffMatrix from_rows(const std::array<double, 3>& f, const std::array<double, 3>& b,
                               const std::array<double, 3>& s);

  std::array<double, 3> f() const { return {f1, f2, f3}; }
  std::array<double, 3> b() const { return {b1, b2, b3}; }
  std::array<double, 3> s() const { return {s1, s2, s3}; }

  /// Rows (-f1,-f2,-f3), (b1,b2,b3), (s1,s2,s3).
  std::array<std::array<double, 3>, 3> display() const;
  static CoeffMatrix from_display(const std::array<std::array<double, 3>, 3>& rows);

  /// Flat order f1,f2,f3,b1,b2,b3,s1,s2,s3.
  std::array<double, 9> flat() const;
  static CoeffMatrix from_flat(const std::array<double, 9>& v);

  double max_abs() const;
  bool operator==(const CoeffMatrix&) const = default;
};

struct LinearFBSDE {
  CoeffMatrix coeffs;
  double h = 0;   // Y(T) = h X(T)
  double x0 = 0;  // X(0)
  double T = 1;

  bool operator==(const LinearFBSDE&) const = default;
};

/// Stochastic LQ problem data with constant coefficients.
struct LQProblem {
  double A = 0, B = 0, C = 0, D = 0;
  double R = 0, S = 0, N = 0;
  double Q = 0;
  double x0 = 0;
  double T = 1;

  bool operator==(const LQProblem&) const = default;
};

struct Interval {
  double lo = 0, hi = 0;
  bool contains(double v) const { return lo <= v && v <= hi; }
  double width() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Constant-per-interval envelopes for time-varying coefficients and a random
/// terminal factor. Flat order matches CoeffMatrix::flat().
struct CoeffEnvelope {
  std::array<Interval, 9> coeffs;
  Interval h;

  static CoeffEnvelope point(const CoeffMatrix& c, double h);
  CoeffMatrix lower() const;
  CoeffMatrix upper() const;
  bool operator==(const CoeffEnvelope&) const = default;
};

/// Checks every invariant of a LinearFBSDE and returns it unchanged, or throws
/// ValidationError listing all violations. h = 1/s3 is detected with relative
/// tolerance 1e-12.
LinearFBSDE validate_fbsde(const LinearFBSDE& raw);
LQProblem validate_lq(const LQProblem& raw);
void validate_envelope(const CoeffEnvelope& env);

/// True when s3 != 0 and h lies within the 1e-12 band around 1/s3.
bool terminal_is_singular(double s3, double h);

}  // namespace lfbsde
