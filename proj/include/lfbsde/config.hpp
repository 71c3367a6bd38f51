#pragma once

#include <optional>
#include <string>
#include <variant>

#include "lfbsde/core.hpp"

namespace lfbsde {

/// A parsed configuration document. FBSDE documents may carry an optional
/// "bounds" object with per-coefficient envelopes:
///   "bounds": {"b": [[lo,hi],[lo,hi],[lo,hi]], "sigma": [...], "f": [...], "h": [lo,hi]}
struct ParsedConfig {
  std::variant<LinearFBSDE, LQProblem> problem;
  std::optional<CoeffEnvelope> envelope;

  bool is_fbsde() const { return std::holds_alternative<LinearFBSDE>(problem); }
  const LinearFBSDE& fbsde() const { return std::get<LinearFBSDE>(problem); }
  const LQProblem& lq() const { return std::get<LQProblem>(problem); }
  bool operator==(const ParsedConfig&) const = default;
};

/// Strict parse: unknown keys, missing keys and non-numeric values are errors.
/// Throws Error(SyntaxError) with the line number in the message, Error(MissingField),
/// Error(UnknownField), Error(TypeMismatch), or ValidationError.
ParsedConfig parse_config(const std::string& text);

/// Reads a file and parses it.
ParsedConfig load_config(const std::string& path);

/// Canonical document; parse_config(serialize(c)) == c.
std::string serialize(const ParsedConfig& c);
std::string serialize(const LinearFBSDE& f);
std::string serialize(const LQProblem& lq);

}  // namespace lfbsde
