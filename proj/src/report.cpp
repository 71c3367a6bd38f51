#include "lfbsde/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace lfbsde {

namespace {

Json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

Json triple(double a, double b, double c) { return Json::array({num(a), num(b), num(c)}); }

Relation relation_from(const std::string& s) {
  for (Relation r : {Relation::Info, Relation::Gt, Relation::Ge, Relation::Lt, Relation::Le, Relation::Eq}) {
    if (s == to_string(r)) return r;
  }
  throw Error(ErrorKind::TypeMismatch, "unknown relation '" + s + "'");
}

double num_from(const Json& j) {
  if (j.is_null()) return std::nan("");
  if (j.is_string()) return j.get<std::string>() == "inf" ? INFINITY : -INFINITY;
  return j.get<double>();
}

}  // namespace

Json to_json(const CoeffMatrix& c) {
  return Json{{"f", triple(c.f1, c.f2, c.f3)}, {"b", triple(c.b1, c.b2, c.b3)}, {"sigma", triple(c.s1, c.s2, c.s3)}};
}

Json to_json(const LinearFBSDE& f) {
  Json j = to_json(f.coeffs);
  j["h"] = num(f.h);
  j["x0"] = num(f.x0);
  j["T"] = num(f.T);
  return j;
}

Json to_json(const LQProblem& lq) {
  return Json{{"A", lq.A}, {"B", lq.B}, {"C", lq.C}, {"D", lq.D}, {"R", lq.R},
              {"S", lq.S}, {"N", lq.N}, {"Q", lq.Q}, {"x0", lq.x0}, {"T", lq.T}};
}

Json to_json(const Cubic& p) { return Json::array({num(p.c3), num(p.c2), num(p.c1), num(p.c0)}); }

Json to_json(const Evidence& e) {
  Json j{{"name", e.name}, {"value", num(e.value)}, {"rel", to_string(e.rel)}};
  if (e.relational()) j["bound"] = num(e.bound);
  return j;
}

Json to_json(const Verdict& v) {
  Json ev = Json::array();
  for (const Evidence& e : v.evidence) ev.push_back(to_json(e));
  return Json{{"decided", to_string(v.decided)}, {"criterion", v.criterion}, {"evidence", ev}};
}

Verdict verdict_from_json(const Json& j) {
  Verdict v;
  const std::string d = j.at("decided").get<std::string>();
  if (d == to_string(Decision::WellPosed)) {
    v.decided = Decision::WellPosed;
  } else if (d == to_string(Decision::ExcludedInput)) {
    v.decided = Decision::ExcludedInput;
  } else if (d == to_string(Decision::NotDecided)) {
    v.decided = Decision::NotDecided;
  } else {
    throw Error(ErrorKind::TypeMismatch, "unknown decision '" + d + "'");
  }
  v.criterion = j.at("criterion").get<std::string>();
  for (const Json& e : j.at("evidence")) {
    Evidence ev;
    ev.name = e.at("name").get<std::string>();
    ev.value = num_from(e.at("value"));
    ev.rel = relation_from(e.at("rel").get<std::string>());
    if (e.contains("bound")) ev.bound = num_from(e.at("bound"));
    v.evidence.push_back(ev);
  }
  return v;
}

Json to_json(const OdeSolution& sol) {
  Json j{{"status", to_string(sol.status.kind)}, {"t_star", num(sol.status.t_star)}, {"step", num(sol.step)},
         {"steps", sol.grid.empty() ? 0 : sol.grid.size() - 1}};
  if (!sol.values.empty()) {
    j["u_initial"] = num(sol.values.front());
    j["u_terminal"] = num(sol.values.back());
  }
  return j;
}

Json to_json(const EnvelopeSolution& env) {
  return Json{{"upper", to_json(env.upper)},
              {"lower", to_json(env.lower)},
              {"ordered", env.ordered},
              {"well_posed", env.well_posed()}};
}

Json to_json(const EquivalentMatrix& m) {
  Json j{{"kind", to_string(m.kind)}};
  if (m.kind != EquivKind::C && m.kind != EquivKind::CRemark) j["p"] = num(m.p);
  if (m.kind == EquivKind::C || m.kind == EquivKind::CRemark || m.kind == EquivKind::D) j["q"] = num(m.q);
  j["matrix"] = to_json(m.matrix);
  return j;
}

Json to_json(const FeasibleSet& s) {
  Json pts = Json::array();
  for (const FeasiblePoint& p : s.points) {
    pts.push_back(Json{{"param", num(p.param)}, {"det2", num(p.det2)}, {"det3", num(p.det3)},
                       {"verdict", to_string(p.verdict.decided)}});
  }
  return Json{{"gate", s.gate}, {"count", s.points.size()}, {"points", pts}};
}

Json to_json(const LambdaDiagnostics& d) {
  return Json{{"direct", to_json(d.direct)},
              {"lambda0", num(d.lambda0)},
              {"lambda0_printed", num(d.lambda0_printed)},
              {"lambda1_printed", num(d.lambda1_printed)},
              {"lambda2_printed", num(d.lambda2_printed)},
              {"lambda2", num(d.lambda2)},
              {"lambda0_ok", d.lambda0_ok},
              {"lambda1_ok", d.lambda1_ok},
              {"lambda2_ok", d.lambda2_ok},
              {"lambda2_corrected_ok", d.lambda2_corrected_ok}};
}

Json to_json(const TransformedSystem& ts) {
  const TransformParams& p = ts.params;
  const auto inv = p.inverse();
  Json cands = Json::array();
  for (const Candidate& c : ts.candidates) {
    cands.push_back(Json{{"m", num(c.m)}, {"n", num(c.n)}, {"c", num(c.c)}, {"outcome", c.outcome}});
  }
  Json j{{"params", Json{{"m", num(p.m)}, {"n", num(p.n)}, {"c", num(p.c)}}},
         {"A", Json::array({num(p.a11()), num(p.a12()), num(p.a21()), num(p.a22())})},
         {"A_inverse", Json::array({num(inv[0]), num(inv[1]), num(inv[2]), num(inv[3])})},
         {"tilde", to_json(ts.tilde.coeffs)},
         {"h_tilde", num(ts.tilde.h)},
         {"z_map", triple(ts.z_map[0], ts.z_map[1], ts.z_map[2])},
         {"x0_relation", Json::array({num(ts.x0_relation[0]), num(ts.x0_relation[1])})},
         {"verdict", to_json(ts.verdict)}};
  try {
    j["lambda"] = to_json(lambda_diagnostics(ts.original.coeffs, p));
  } catch (const Error& e) {
    j["lambda"] = std::string("unavailable: ") + e.what();
  }
  if (!cands.empty()) j["candidates"] = cands;
  return j;
}

Json to_json(const Stats& s) {
  return Json{{"mean", num(s.mean)}, {"mean_abs", num(s.mean_abs)}, {"max_abs", num(s.max_abs)},
              {"variance", num(s.variance)}};
}

Json to_json(const SimResult& r) {
  return Json{{"n_paths", r.n_paths},
              {"dt", num(r.dt)},
              {"seed", r.seed},
              {"terminal_residual", to_json(r.terminal_residual)},
              {"bsde_residual", to_json(r.bsde_residual)},
              {"x_terminal", to_json(r.x_terminal)},
              {"y_initial", to_json(r.y_initial)},
              {"path_scale", num(r.path_scale)},
              {"blown_up", r.blown_up}};
}

Json to_json(const BsdeReport& r) {
  return Json{{"residual_coarse", num(r.residual_coarse)},
              {"residual_fine", num(r.residual_fine)},
              {"bound_coarse", num(r.bound_coarse)},
              {"bound_fine", num(r.bound_fine)},
              {"ratio", num(r.ratio)},
              {"within_bound", r.within_bound},
              {"converging", r.converging},
              {"pass", r.pass()}};
}

Json to_json(const OptimalControlLaw& law) {
  return Json{{"kx", num(law.kx)}, {"ky", num(law.ky)}, {"kz", num(law.kz)}, {"rendered", render_law(law)}};
}

Json to_json(const StationarityReport& r) {
  Json rows = Json::array();
  for (const StationarityRow& row : r.rows) {
    rows.push_back(Json{{"direction", row.direction},
                        {"eps", num(row.eps)},
                        {"j_plus", num(row.j_plus)},
                        {"j_minus", num(row.j_minus)},
                        {"difference", num(row.difference)},
                        {"derivative", num(row.derivative)},
                        {"threshold", num(row.threshold)},
                        {"pass", row.pass}});
  }
  Json ratios = Json::array();
  for (const auto& [dir, ratio] : r.ratios) ratios.push_back(Json{{"direction", dir}, {"ratio", num(ratio)}});
  return Json{{"j0", num(r.j0)}, {"rows", rows}, {"ratios", ratios}, {"pass", r.pass}};
}

Json to_json(const LqSolution& s) {
  Json chain = Json::array();
  for (const Verdict& v : s.chain) chain.push_back(to_json(v));
  Json j{{"fbsde", to_json(s.fbsde)}, {"law", to_json(s.law)}, {"chain", chain}, {"route", s.route}};
  if (s.transform) j["transform"] = to_json(*s.transform);
  j["field"] = to_json(s.field.ode);
  if (!s.field.z_ratio.empty()) j["field"]["z_ratio_initial"] = num(s.field.z_ratio.front());
  j["simulation"] = to_json(s.sim);
  j["diagnostics"] = s.diagnostics;
  return j;
}

std::string render_law(const OptimalControlLaw& law) {
  std::string out = "u =";
  bool first = true;
  auto term = [&](double k, const char* var) {
    if (k == 0.0) return;
    const double a = std::abs(k);
    out += first ? (k < 0 ? " -" : " ") : (k < 0 ? " - " : " + ");
    if (a != 1.0) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g ", a);
      out += buf;
    }
    out += var;
    first = false;
  };
  term(law.kx, "x");
  term(law.ky, "y");
  term(law.kz, "z");
  if (first) out += " 0";
  return out;
}

namespace {

std::string scalar(const Json& j) {
  if (j.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", j.get<double>());
    return buf;
  }
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

bool flat_array(const Json& j) {
  for (const Json& e : j) {
    if (e.is_structured()) return false;
  }
  return true;
}

void render(std::ostream& out, const Json& j, int depth) {
  const std::string pad(2 * depth, ' ');
  if (j.is_object()) {
    for (const auto& [key, val] : j.items()) {
      if (val.is_object() || (val.is_array() && !flat_array(val))) {
        out << pad << key << ":\n";
        render(out, val, depth + 1);
      } else {
        out << pad << key << ": ";
        render(out, val, 0);
      }
    }
  } else if (j.is_array() && !flat_array(j)) {
    for (const Json& e : j) {
      // "- " takes the place of the item's own indentation on its first line.
      std::ostringstream item;
      render(item, e, depth + 1);
      std::string text = item.str();
      if (e.is_object() && text.size() >= pad.size() + 2) {
        out << pad << "- " << text.substr(pad.size() + 2);
      } else {
        out << pad << "-\n" << text;
      }
    }
  } else if (j.is_array()) {
    out << '[';
    for (std::size_t i = 0; i < j.size(); ++i) out << (i ? ", " : "") << scalar(j[i]);
    out << "]\n";
  } else {
    out << scalar(j) << '\n';
  }
}

}  // namespace

std::string render_human(const Json& report) {
  std::ostringstream out;
  render(out, report, 0);
  return out.str();
}

}  // namespace lfbsde
