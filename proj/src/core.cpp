#include "lfbsde/core.hpp"

#include <algorithm>
#include <cmath>

namespace lfbsde {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::HorizonNonPositive: return "HorizonNonPositive";
    case ErrorKind::TerminalSingular: return "TerminalSingular";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::MissingField: return "MissingField";
    case ErrorKind::UnknownField: return "UnknownField";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::SingularEvaluation: return "SingularEvaluation";
    case ErrorKind::IntervalInvalid: return "IntervalInvalid";
    case ErrorKind::NDegenerate: return "NDegenerate";
    case ErrorKind::EmptyGate: return "EmptyGate";
    case ErrorKind::DegenerateTransform: return "DegenerateTransform";
    case ErrorKind::TerminalDegenerate: return "TerminalDegenerate";
    case ErrorKind::NoTransformFound: return "NoTransformFound";
    case ErrorKind::NoDecouplingRoot: return "NoDecouplingRoot";
    case ErrorKind::NotWellPosedNumerically: return "NotWellPosedNumerically";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Unsolvable: return "Unsolvable";
  }
  return "Unknown";
}

namespace {

std::string describe(const std::vector<Violation>& violations) {
  std::string out = "validation failed:";
  for (const auto& v : violations) {
    out += ' ';
    out += to_string(v.kind);
    if (!v.field.empty()) out += "(" + v.field + ")";
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? ErrorKind::InvalidArgument : violations.front().kind,
            describe(violations)),
      violations_(std::move(violations)) {}

CoeffMatrix CoeffMatrix::from_rows(const std::array<double, 3>& f, const std::array<double, 3>& b,
                                   const std::array<double, 3>& s) {
  return {f[0], f[1], f[2], b[0], b[1], b[2], s[0], s[1], s[2]};
}

std::array<std::array<double, 3>, 3> CoeffMatrix::display() const {
  return {{{-f1, -f2, -f3}, {b1, b2, b3}, {s1, s2, s3}}};
}

CoeffMatrix CoeffMatrix::from_display(const std::array<std::array<double, 3>, 3>& rows) {
  return {-rows[0][0], -rows[0][1], -rows[0][2], rows[1][0], rows[1][1],
          rows[1][2],  rows[2][0],  rows[2][1],  rows[2][2]};
}

std::array<double, 9> CoeffMatrix::flat() const { return {f1, f2, f3, b1, b2, b3, s1, s2, s3}; }

CoeffMatrix CoeffMatrix::from_flat(const std::array<double, 9>& v) {
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
}

double CoeffMatrix::max_abs() const {
  double m = 0;
  for (double v : flat()) m = std::max(m, std::abs(v));
  return m;
}

CoeffEnvelope CoeffEnvelope::point(const CoeffMatrix& c, double h) {
  CoeffEnvelope env;
  const auto v = c.flat();
  for (std::size_t i = 0; i < 9; ++i) env.coeffs[i] = {v[i], v[i]};
  env.h = {h, h};
  return env;
}

CoeffMatrix CoeffEnvelope::lower() const {
  std::array<double, 9> v{};
  for (std::size_t i = 0; i < 9; ++i) v[i] = coeffs[i].lo;
  return CoeffMatrix::from_flat(v);
}

CoeffMatrix CoeffEnvelope::upper() const {
  std::array<double, 9> v{};
  for (std::size_t i = 0; i < 9; ++i) v[i] = coeffs[i].hi;
  return CoeffMatrix::from_flat(v);
}

bool terminal_is_singular(double s3, double h) {
  if (s3 == 0.0) return false;
  return std::abs(h - 1.0 / s3) <= 1e-12 * std::max(1.0, std::abs(h));
}

LinearFBSDE validate_fbsde(const LinearFBSDE& raw) {
  static constexpr const char* names[9] = {"f1", "f2", "f3", "b1", "b2", "b3", "s1", "s2", "s3"};
  std::vector<Violation> violations;
  const auto v = raw.coeffs.flat();
  for (std::size_t i = 0; i < 9; ++i) {
    if (!std::isfinite(v[i])) violations.push_back({ErrorKind::NonFinite, names[i]});
  }
  if (!std::isfinite(raw.h)) violations.push_back({ErrorKind::NonFinite, "h"});
  if (!std::isfinite(raw.x0)) violations.push_back({ErrorKind::NonFinite, "x0"});
  if (!std::isfinite(raw.T)) {
    violations.push_back({ErrorKind::NonFinite, "T"});
  } else if (raw.T <= 0) {
    violations.push_back({ErrorKind::HorizonNonPositive, "T"});
  }
  if (std::isfinite(raw.h) && std::isfinite(raw.coeffs.s3) && terminal_is_singular(raw.coeffs.s3, raw.h)) {
    violations.push_back({ErrorKind::TerminalSingular, "h"});
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return raw;
}

LQProblem validate_lq(const LQProblem& raw) {
  std::vector<Violation> violations;
  const std::pair<const char*, double> fields[] = {{"A", raw.A}, {"B", raw.B}, {"C", raw.C},
                                                   {"D", raw.D}, {"R", raw.R}, {"S", raw.S},
                                                   {"N", raw.N}, {"Q", raw.Q}, {"x0", raw.x0},
                                                   {"T", raw.T}};
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value)) violations.push_back({ErrorKind::NonFinite, name});
  }
  if (std::isfinite(raw.T) && raw.T <= 0) violations.push_back({ErrorKind::HorizonNonPositive, "T"});
  if (raw.N == 0.0) violations.push_back({ErrorKind::NDegenerate, "N"});
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return raw;
}

void validate_envelope(const CoeffEnvelope& env) {
  std::vector<Violation> violations;
  static constexpr const char* names[9] = {"f1", "f2", "f3", "b1", "b2", "b3", "s1", "s2", "s3"};
  auto check = [&](const Interval& iv, const char* name) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
      violations.push_back({ErrorKind::IntervalInvalid, name});
    }
  };
  for (std::size_t i = 0; i < 9; ++i) check(env.coeffs[i], names[i]);
  check(env.h, "h");
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

}  // namespace lfbsde
