#pragma once

#include <string>

#include <json.hpp>

#include "lfbsde/core.hpp"
#include "lfbsde/criteria.hpp"
#include "lfbsde/cubic.hpp"
#include "lfbsde/dominating.hpp"
#include "lfbsde/equivalence.hpp"
#include "lfbsde/lq.hpp"
#include "lfbsde/solver.hpp"
#include "lfbsde/transform.hpp"

namespace lfbsde {

/// Machine reports keep insertion order so the human rendering reads top-down.
using Json = nlohmann::ordered_json;

Json to_json(const CoeffMatrix& c);
Json to_json(const LinearFBSDE& f);
Json to_json(const LQProblem& lq);
Json to_json(const Cubic& p);
Json to_json(const Evidence& e);
Json to_json(const Verdict& v);
Json to_json(const OdeSolution& sol);  // summary only, no trajectory
Json to_json(const EnvelopeSolution& env);
Json to_json(const EquivalentMatrix& m);
Json to_json(const FeasibleSet& s);
Json to_json(const LambdaDiagnostics& d);
Json to_json(const TransformedSystem& ts);
Json to_json(const Stats& s);
Json to_json(const SimResult& r);
Json to_json(const BsdeReport& r);
Json to_json(const OptimalControlLaw& law);
Json to_json(const StationarityReport& r);
Json to_json(const LqSolution& s);

/// Inverse of to_json for verdicts.
Verdict verdict_from_json(const Json& j);

/// "u = 2 x + y + 2 z"
std::string render_law(const OptimalControlLaw& law);

/// Indented plain-text view of a machine report, numbers at 6 significant digits.
std::string render_human(const Json& report);

}  // namespace lfbsde
