// Command-line driver. Exit codes: 0 success, 2 input error, 3 undecided or
// nothing found, 4 verification failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "lfbsde/config.hpp"
#include "lfbsde/report.hpp"

using namespace lfbsde;

namespace {

constexpr int kOk = 0;
constexpr int kInput = 2;
constexpr int kUndecided = 3;
constexpr int kVerify = 4;

struct Globals {
  std::string out;
  bool json = false;
  std::uint64_t seed = 7;
  double dt = 1e-3;
  std::size_t paths = 10000;
};

struct Outcome {
  Json report;
  int code = kOk;
};

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::EmptyGate:
    case ErrorKind::NoTransformFound:
    case ErrorKind::NoDecouplingRoot:
    case ErrorKind::NotWellPosedNumerically:
    case ErrorKind::Unsolvable:
      return kUndecided;
    default:
      return kInput;
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  f << text;
}

LinearFBSDE fbsde_of(const ParsedConfig& cfg) {
  return cfg.is_fbsde() ? cfg.fbsde() : build_hamiltonian(validate_lq(cfg.lq()));
}

Json echo(const ParsedConfig& cfg) { return cfg.is_fbsde() ? to_json(cfg.fbsde()) : to_json(cfg.lq()); }

// analyze

Outcome cmd_analyze(const ParsedConfig& cfg, const Globals& g) {
  const LinearFBSDE f = fbsde_of(cfg);
  Outcome o;
  o.report["input"] = echo(cfg);
  Json chain = Json::array();
  bool fired = false;
  auto add = [&](const Verdict& v) {
    chain.push_back(to_json(v));
    fired = fired || v.well_posed();
  };
  add(check_monotonicity(f.coeffs, f.h));
  if (cfg.envelope) {
    const EnvelopeSolution env = integrate_dominating_envelope(*cfg.envelope, f.T, g.dt);
    o.report["envelope"] = to_json(env);
    fired = fired || env.well_posed();
  } else {
    add(check_lemma38(f));
  }
  add(check_thm39(f));
  if (!cfg.is_fbsde()) add(check_cor52(cfg.lq()));
  o.report["chain"] = chain;
  o.report["dominating_ode"] = to_json(integrate_dominating(f, g.dt));
  o.report["well_posed"] = fired;
  o.code = fired ? kOk : kUndecided;
  return o;
}

// equiv

struct EquivArgs {
  std::optional<double> p, q;
  std::string search;
  bool remark = false;
  double lo = -10, hi = 10, step = 0.01;
  std::string csv;
};

Outcome cmd_equiv(const ParsedConfig& cfg, const EquivArgs& a) {
  const LinearFBSDE f = fbsde_of(cfg);
  Outcome o;
  o.report["input"] = echo(cfg);
  if (!a.search.empty()) {
    const SearchGrid grid{a.lo, a.hi, a.step};
    const FeasibleSet set = a.search == "p" ? feasible_p(f.coeffs, f.h, grid) : feasible_q(f.coeffs, f.h, grid);
    if (!a.csv.empty()) write_text(a.csv, to_csv(set, a.search));
    o.report["search"] = a.search;
    o.report["feasible"] = to_json(set);
    return o;
  }
  if (!a.p && !a.q) throw Error(ErrorKind::InvalidArgument, "equiv needs --p, --q or --search");
  EquivalentMatrix m;
  if (a.p && a.q) {
    m = equiv_D(f.coeffs, *a.p, *a.q);
  } else if (a.p) {
    m = a.remark ? equiv_remark35(f.coeffs, EquivKind::BRemark, *a.p) : equiv_B(f.coeffs, *a.p);
  } else {
    m = a.remark ? equiv_remark35(f.coeffs, EquivKind::CRemark, *a.q) : equiv_C(f.coeffs, *a.q);
  }
  o.report["equivalent"] = to_json(m);
  const LinearFBSDE e{m.matrix, f.h, f.x0, f.T};
  const Verdict mono = check_monotonicity(e.coeffs, e.h);
  o.report["chain"] = Json::array({to_json(mono), to_json(check_lemma38(e))});
  o.report["l_poly"] = to_json(l_poly(m.matrix));
  return o;
}

// transform

struct TransformArgs {
  std::optional<double> m, n;
  double c = 1;
  bool automatic = false;
};

TransformedSystem make_transform(const LinearFBSDE& f, const TransformArgs& a) {
  if (a.automatic) {
    SynthesisOptions opts;
    if (a.n) opts.n = a.n;
    if (a.m) opts.m_grid = {*a.m, *a.m, 1.0};
    opts.c_grid = {a.c};
    return synthesize_transform(f, opts);
  }
  if (!a.m || !a.n) throw Error(ErrorKind::InvalidArgument, "transform needs --m and --n, or --auto");
  return transform_system(f, TransformParams::make(*a.m, *a.n, a.c));
}

Outcome cmd_transform(const ParsedConfig& cfg, const TransformArgs& a) {
  const LinearFBSDE f = fbsde_of(cfg);
  const TransformedSystem ts = make_transform(f, a);
  Outcome o;
  o.report["input"] = echo(cfg);
  o.report["transform"] = to_json(ts);
  o.code = ts.verdict.well_posed() ? kOk : kUndecided;
  return o;
}

// solve

struct SolveArgs {
  TransformArgs transform;
  std::string csv;
  std::size_t keep = 10;
};

Outcome cmd_solve(const ParsedConfig& cfg, const SolveArgs& a, const Globals& g) {
  const LinearFBSDE f = fbsde_of(cfg);
  Outcome o;
  o.report["input"] = echo(cfg);
  const std::size_t keep = a.csv.empty() ? 0 : a.keep;
  const bool use_transform = a.transform.automatic || (a.transform.m && a.transform.n);

  BsdeReport verify;
  PathEnsemble paths;
  if (!use_transform) {
    const Verdict mono = check_monotonicity(f.coeffs, f.h);
    const Verdict l38 = check_lemma38(f);
    const Verdict t39 = check_thm39(f);
    o.report["chain"] = Json::array({to_json(mono), to_json(l38), to_json(t39)});
    const Verdict* fired = mono.well_posed() ? &mono : l38.well_posed() ? &l38 : t39.well_posed() ? &t39 : nullptr;
    if (!fired) {
      o.report["error"] = "no criterion fired; try --auto";
      o.code = kUndecided;
      return o;
    }
    o.report["route"] = fired->criterion;
    const DecouplingField fine = build_field(f, g.dt);
    const SimResult coarse_r = simulate(f, build_field(f, 2 * g.dt), g.paths, g.seed);
    const SimResult fine_r = simulate(f, fine, g.paths, g.seed, keep);
    verify = verify_bsde(coarse_r, fine_r);
    o.report["field"] = to_json(fine.ode);
    o.report["simulation"] = to_json(fine_r);
    paths = fine_r.kept;
  } else {
    const TransformedSystem ts = make_transform(f, a.transform);
    o.report["transform"] = to_json(ts);
    if (!ts.verdict.well_posed()) {
      o.report["error"] = "transformed system is not decided";
      o.code = kUndecided;
      return o;
    }
    o.report["route"] = ts.verdict.criterion;
    const TransformedSolution coarse = solve_transformed(ts, 2 * g.dt, g.paths, g.seed);
    const TransformedSolution fine = solve_transformed(ts, g.dt, g.paths, g.seed, keep);
    verify = verify_bsde(coarse.tilde_result, fine.tilde_result);
    o.report["tilde_x0"] = fine.tilde.x0;
    o.report["field"] = to_json(fine.field.ode);
    o.report["simulation"] = to_json(fine.tilde_result);
    paths = fine.original_paths;
  }
  o.report["verification"] = to_json(verify);
  if (!a.csv.empty()) write_text(a.csv, to_csv(paths));
  o.code = verify.pass() ? kOk : kVerify;
  return o;
}

// lq

struct LqArgs {
  bool printed = false;
  std::string csv;
  std::size_t keep = 10;
  std::vector<double> eps{1e-1, 1e-2};
  bool skip_stationarity = false;
};

Outcome cmd_lq(const ParsedConfig& cfg, const LqArgs& a, const Globals& g) {
  if (cfg.is_fbsde()) throw Error(ErrorKind::InvalidArgument, "lq needs a document of kind \"lq\"");
  const LQProblem lq = validate_lq(cfg.lq());
  LqOptions opts;
  opts.use_printed_fbsde = a.printed;
  opts.dt = g.dt;
  opts.n_paths = g.paths;
  opts.seed = g.seed;
  opts.keep_paths = a.csv.empty() ? 0 : a.keep;
  const LqSolution sol = solve_lq(lq, opts);

  Outcome o;
  o.report["input"] = echo(cfg);
  o.report["solution"] = to_json(sol);
  const bool ok = residual_within_bound(sol.sim);
  o.report["residual_within_bound"] = ok;
  if (!a.skip_stationarity) {
    const StationarityReport st =
        stationarity_check(lq, feedback_gains(sol.law, sol.field), a.eps, default_directions(), g.paths, g.seed);
    o.report["stationarity"] = to_json(st);
  }
  if (!a.csv.empty()) {
    std::ofstream f(a.csv);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + a.csv + "'");
    f.precision(17);
    f << "path_id,t,X,Y,Z,u\n";
    for (std::size_t p = 0; p < sol.paths.paths.size(); ++p) {
      const Path& path = sol.paths.paths[p];
      for (std::size_t k = 0; k < path.X.size(); ++k) {
        f << p << ',' << sol.paths.grid[k] << ',' << path.X[k] << ',' << path.Y[k] << ',' << path.Z[k] << ','
          << sol.controls[p][k] << '\n';
      }
    }
  }
  o.code = ok ? kOk : kVerify;
  return o;
}

void emit(const Outcome& o, const Globals& g) {
  const std::string text = g.json ? o.report.dump(2) + "\n" : render_human(o.report);
  if (g.out.empty()) {
    std::cout << text;
  } else {
    write_text(g.out, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Well-posedness analysis and Monte Carlo solution of linear FBSDEs"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out, "Write the report to this file");
  app.add_flag("--json", g.json, "Emit the machine report (JSON)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--dt", g.dt, "Time step")->check(CLI::PositiveNumber);
  app.add_option("--paths", g.paths, "Number of Monte Carlo paths")->check(CLI::PositiveNumber);

  std::string file;
  auto add_file = [&](CLI::App* sub) { sub->add_option("file", file, "Configuration document")->required(); };

  auto* analyze = app.add_subcommand("analyze", "Run the well-posedness criteria");
  add_file(analyze);

  EquivArgs ea;
  auto* equiv = app.add_subcommand("equiv", "Equivalent coefficient matrices and parameter search");
  add_file(equiv);
  equiv->add_option("--p", ea.p, "Girsanov-type parameter");
  equiv->add_option("--q", ea.q, "Second equivalence parameter");
  equiv->add_flag("--remark", ea.remark, "Use the variant from the b1/f2 symmetry");
  equiv->add_option("--search", ea.search, "Scan p or q for definite symmetrized matrices")
      ->check(CLI::IsMember({"p", "q"}));
  equiv->add_option("--lo", ea.lo, "Search lower bound");
  equiv->add_option("--hi", ea.hi, "Search upper bound");
  equiv->add_option("--step", ea.step, "Search step")->check(CLI::PositiveNumber);
  equiv->add_option("--csv", ea.csv, "Write the feasible set as CSV");

  TransformArgs ta;
  auto add_transform_opts = [](CLI::App* sub, TransformArgs& t) {
    sub->add_option("--m", t.m, "Transform parameter m");
    sub->add_option("--n", t.n, "Transform parameter n");
    sub->add_option("--c", t.c, "Transform parameter c");
    sub->add_flag("--auto", t.automatic, "Search for a decoupling transform");
  };
  auto* transform = app.add_subcommand("transform", "Linear transformation of the system");
  add_file(transform);
  add_transform_opts(transform, ta);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Build the decoupling field, simulate and verify");
  add_file(solve);
  add_transform_opts(solve, sa.transform);
  solve->add_option("--csv", sa.csv, "Write kept paths (original coordinates) as CSV");
  solve->add_option("--keep", sa.keep, "Number of paths written to the CSV");

  LqArgs la;
  auto* lqcmd = app.add_subcommand("lq", "Solve an LQ control problem through its Hamiltonian system");
  add_file(lqcmd);
  lqcmd->add_flag("--use-printed-fbsde", la.printed, "Use the worked example's printed Hamiltonian system");
  lqcmd->add_option("--csv", la.csv, "Write kept paths with the control as CSV");
  lqcmd->add_option("--keep", la.keep, "Number of paths written to the CSV");
  lqcmd->add_option("--eps", la.eps, "Perturbation sizes for the stationarity check");
  lqcmd->add_flag("--no-stationarity", la.skip_stationarity, "Skip the stationarity check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    const ParsedConfig cfg = load_config(file);
    Outcome o;
    if (analyze->parsed()) {
      o = cmd_analyze(cfg, g);
    } else if (equiv->parsed()) {
      o = cmd_equiv(cfg, ea);
    } else if (transform->parsed()) {
      o = cmd_transform(cfg, ta);
    } else if (solve->parsed()) {
      o = cmd_solve(cfg, sa, g);
    } else {
      o = cmd_lq(cfg, la, g);
    }
    o.report["exit_code"] = o.code;
    emit(o, g);
    return o.code;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
}
