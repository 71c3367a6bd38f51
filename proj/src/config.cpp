#include "lfbsde/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lfbsde {

namespace {

using json = nlohmann::json;

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  std::initializer_list<const char*> optional = {}) {
  for (const char* k : allowed) {
    if (!obj.contains(k)) throw Error(ErrorKind::MissingField, k);
  }
  for (const auto& [key, _] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; }) ||
                       std::any_of(optional.begin(), optional.end(), [&](const char* k) { return key == k; });
    if (!known) throw Error(ErrorKind::UnknownField, key);
  }
}

double number(const json& v, const std::string& name) {
  if (!v.is_number()) throw Error(ErrorKind::TypeMismatch, name + ": expected a number");
  return v.get<double>();
}

std::array<double, 3> triple(const json& v, const std::string& name) {
  if (!v.is_array() || v.size() != 3) throw Error(ErrorKind::TypeMismatch, name + ": expected 3 numbers");
  return {number(v[0], name + "[0]"), number(v[1], name + "[1]"), number(v[2], name + "[2]")};
}

Interval interval(const json& v, const std::string& name) {
  if (!v.is_array() || v.size() != 2) throw Error(ErrorKind::TypeMismatch, name + ": expected [lo, hi]");
  return {number(v[0], name + "[0]"), number(v[1], name + "[1]")};
}

CoeffEnvelope parse_bounds(const json& b) {
  if (!b.is_object()) throw Error(ErrorKind::TypeMismatch, "bounds: expected an object");
  require_keys(b, {"b", "sigma", "f", "h"});
  CoeffEnvelope env;
  // flat order f, b, sigma
  const char* rows[3] = {"f", "b", "sigma"};
  for (int r = 0; r < 3; ++r) {
    const json& row = b.at(rows[r]);
    if (!row.is_array() || row.size() != 3) {
      throw Error(ErrorKind::TypeMismatch, std::string("bounds.") + rows[r] + ": expected 3 intervals");
    }
    for (int k = 0; k < 3; ++k) {
      env.coeffs[static_cast<std::size_t>(3 * r + k)] =
          interval(row[static_cast<std::size_t>(k)], std::string("bounds.") + rows[r] + "[" + std::to_string(k) + "]");
    }
  }
  env.h = interval(b.at("h"), "bounds.h");
  validate_envelope(env);
  return env;
}

json to_json(const LinearFBSDE& f) {
  const CoeffMatrix& c = f.coeffs;
  return json{{"kind", "fbsde"},
              {"b", {c.b1, c.b2, c.b3}},
              {"sigma", {c.s1, c.s2, c.s3}},
              {"f", {c.f1, c.f2, c.f3}},
              {"h", f.h},
              {"x0", f.x0},
              {"T", f.T}};
}

json to_json(const LQProblem& q) {
  return json{{"kind", "lq"}, {"A", q.A}, {"B", q.B}, {"C", q.C}, {"D", q.D}, {"R", q.R},
              {"S", q.S},     {"N", q.N}, {"Q", q.Q}, {"x0", q.x0}, {"T", q.T}};
}

json to_json(const CoeffEnvelope& env) {
  auto row = [&](int r) {
    json out = json::array();
    for (int k = 0; k < 3; ++k) {
      const Interval& iv = env.coeffs[static_cast<std::size_t>(3 * r + k)];
      out.push_back({iv.lo, iv.hi});
    }
    return out;
  };
  return json{{"f", row(0)}, {"b", row(1)}, {"sigma", row(2)}, {"h", {env.h.lo, env.h.hi}}};
}

}  // namespace

ParsedConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::TypeMismatch, "document: expected an object");
  if (!doc.contains("kind")) throw Error(ErrorKind::MissingField, "kind");
  if (!doc["kind"].is_string()) throw Error(ErrorKind::TypeMismatch, "kind: expected a string");
  const std::string kind = doc["kind"].get<std::string>();

  if (kind == "fbsde") {
    require_keys(doc, {"kind", "b", "sigma", "f", "h", "x0", "T"}, {"bounds"});
    LinearFBSDE f;
    f.coeffs = CoeffMatrix::from_rows(triple(doc["f"], "f"), triple(doc["b"], "b"), triple(doc["sigma"], "sigma"));
    f.h = number(doc["h"], "h");
    f.x0 = number(doc["x0"], "x0");
    f.T = number(doc["T"], "T");
    ParsedConfig out{validate_fbsde(f), std::nullopt};
    if (doc.contains("bounds")) out.envelope = parse_bounds(doc["bounds"]);
    return out;
  }
  if (kind == "lq") {
    require_keys(doc, {"kind", "A", "B", "C", "D", "R", "S", "N", "Q", "x0", "T"});
    LQProblem q;
    q.A = number(doc["A"], "A");
    q.B = number(doc["B"], "B");
    q.C = number(doc["C"], "C");
    q.D = number(doc["D"], "D");
    q.R = number(doc["R"], "R");
    q.S = number(doc["S"], "S");
    q.N = number(doc["N"], "N");
    q.Q = number(doc["Q"], "Q");
    q.x0 = number(doc["x0"], "x0");
    q.T = number(doc["T"], "T");
    return {validate_lq(q), std::nullopt};
  }
  throw Error(ErrorKind::TypeMismatch, "kind: expected \"fbsde\" or \"lq\", got \"" + kind + "\"");
}

ParsedConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize(const LinearFBSDE& f) { return to_json(f).dump(2); }
std::string serialize(const LQProblem& lq) { return to_json(lq).dump(2); }

std::string serialize(const ParsedConfig& c) {
  json doc = c.is_fbsde() ? to_json(c.fbsde()) : to_json(c.lq());
  if (c.envelope) doc["bounds"] = to_json(*c.envelope);
  return doc.dump(2);
}

}  // namespace lfbsde
