#include "lfbsde/criteria.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "lfbsde/dominating.hpp"

namespace lfbsde {

const char* to_string(Decision d) {
  switch (d) {
    case Decision::WellPosed: return "WellPosed";
    case Decision::NotDecided: return "NotDecided";
    case Decision::ExcludedInput: return "ExcludedInput";
  }
  return "Unknown";
}

const char* to_string(Relation r) {
  switch (r) {
    case Relation::Info: return "info";
    case Relation::Gt: return ">";
    case Relation::Ge: return ">=";
    case Relation::Lt: return "<";
    case Relation::Le: return "<=";
    case Relation::Eq: return "==";
  }
  return "?";
}

bool Evidence::holds() const {
  switch (rel) {
    case Relation::Info: return true;
    case Relation::Gt: return value > bound;
    case Relation::Ge: return value >= bound;
    case Relation::Lt: return value < bound;
    case Relation::Le: return value <= bound;
    case Relation::Eq: return value == bound;
  }
  return false;
}

const Evidence* Verdict::find(const std::string& name) const {
  for (const auto& e : evidence) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

Decision recheck(const Verdict& v) {
  if (v.decided == Decision::ExcludedInput) return Decision::ExcludedInput;
  if (v.criterion.empty()) return Decision::NotDecided;
  bool any = false;
  for (const auto& e : v.evidence) {
    if (!e.relational()) continue;
    any = true;
    if (!e.holds()) return Decision::NotDecided;
  }
  return any ? Decision::WellPosed : Decision::NotDecided;
}

QuadraticForm3 symmetrize(const CoeffMatrix& c) {
  return {-c.f1, c.b2, c.s3, 0.5 * (c.b1 - c.f2), 0.5 * (c.s1 - c.f3), 0.5 * (c.s2 + c.b3)};
}

namespace {

using Cond = Evidence;

double lambda_min(const QuadraticForm3& m) {
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = m(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double eig_tol(const QuadraticForm3& n) {
  return 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, n.max_abs());
}

// Assemble a verdict from per-case condition lists: the first case whose
// conditions all hold fires; otherwise the first failing condition of every case
// is kept so recheck() reproduces NotDecided.
struct Case {
  std::string label;
  std::vector<Cond> conds;
};

Verdict decide(const std::vector<Case>& cases, std::vector<Evidence> info,
               const std::string& fail_label) {
  for (const auto& c : cases) {
    const bool ok = std::all_of(c.conds.begin(), c.conds.end(), [](const Cond& e) { return e.holds(); });
    if (ok) {
      Verdict v{Decision::WellPosed, c.label, c.conds};
      v.evidence.insert(v.evidence.end(), info.begin(), info.end());
      return v;
    }
  }
  Verdict v{Decision::NotDecided, fail_label, {}};
  for (const auto& c : cases) {
    for (const auto& e : c.conds) {
      if (!e.holds()) {
        Evidence failed = e;
        failed.name = c.label + ": " + e.name;
        v.evidence.push_back(failed);
        break;
      }
    }
  }
  v.evidence.insert(v.evidence.end(), info.begin(), info.end());
  return v;
}

}  // namespace

double max_beta1(const QuadraticForm3& n, double beta2) {
  const double tol = eig_tol(n);
  auto feasible = [&](double b1) { return lambda_min(n.shifted(b1, beta2)) >= -tol; };
  if (!feasible(0.0)) return -1.0;
  double lo = 0.0, hi = std::max(0.0, n(0, 0));
  if (feasible(hi)) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::optional<BetaCertificate> certify_betas(const QuadraticForm3& n, double margin) {
  const double tol = eig_tol(n);
  if (lambda_min(n) < -tol) return std::nullopt;

  // Largest beta2 with beta1 = 0.
  double b2_lo = 0.0, b2_hi = std::max(0.0, std::min(n(1, 1), n(2, 2)));
  auto feasible2 = [&](double b2) { return lambda_min(n.shifted(0.0, b2)) >= -tol; };
  if (feasible2(b2_hi)) {
    b2_lo = b2_hi;
  } else {
    for (int it = 0; it < 200 && b2_hi - b2_lo > 1e-13 * std::max(1.0, b2_hi); ++it) {
      const double mid = 0.5 * (b2_lo + b2_hi);
      (feasible2(mid) ? b2_lo : b2_hi) = mid;
    }
  }
  const double beta2_max = b2_lo;

  BetaCertificate best{max_beta1(n, 0.0), 0.0, 0.0};
  if (beta2_max > margin) {
    // beta2 * beta1max(beta2) is log-concave on [0, beta2_max] (the feasible set is
    // convex), so golden-section search finds its maximum.
    auto product = [&](double b2) { return b2 * std::max(0.0, max_beta1(n, b2)); };
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0, b = beta2_max;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double p1 = product(x1), p2 = product(x2);
    for (int it = 0; it < 100 && b - a > 1e-12 * beta2_max; ++it) {
      if (p1 < p2) {
        a = x1;
        x1 = x2;
        p1 = p2;
        x2 = a + g * (b - a);
        p2 = product(x2);
      } else {
        b = x2;
        x2 = x1;
        p2 = p1;
        x1 = b - g * (b - a);
        p1 = product(x1);
      }
    }
    const double b2 = 0.5 * (a + b);
    const double b1 = max_beta1(n, b2);
    if (b1 > margin) {
      best = {b1, b2, 0.0};
    } else if (best.beta1 <= margin) {
      best = {std::max(0.0, b1), beta2_max, 0.0};
    }
  }
  // Step back from the frontier so the certificate holds with room to spare.
  best.beta1 *= 1.0 - 1e-9;
  best.beta2 *= 1.0 - 1e-9;
  best.lambda_min = lambda_min(n.shifted(best.beta1, best.beta2));
  return best;
}

Verdict check_monotonicity(const CoeffMatrix& c, double h) {
  const QuadraticForm3 m = symmetrize(c);
  const double margin = 1e-10 * std::max(1.0, m.max_abs());

  std::vector<Case> cases;
  std::vector<Evidence> info{{"h", h}};
  for (int which = 0; which < 2; ++which) {
    const bool upper = which == 0;  // case (i): form <= -beta1 x^2 - beta2 (y^2+z^2)
    const QuadraticForm3 n = upper ? m.negated() : m;
    const std::string label = upper ? "Lemma2.2(i)" : "Lemma2.2(ii)";
    const std::string form = upper ? "-M" : "M";
    info.push_back({form + " minor1", n.minor1()});
    info.push_back({form + " minor2", n.minor2()});
    info.push_back({form + " minor3", n.minor3()});

    const auto cert = certify_betas(n, margin);
    if (!cert) {
      cases.push_back({label, {{"lambda_min(" + form + ")", lambda_min(n), Relation::Ge, -eig_tol(n)}}});
      continue;
    }
    const Cond lam{"lambda_min(" + form + " - diag(beta))", cert->lambda_min, Relation::Ge, -eig_tol(n)};
    const Relation strict_h = upper ? Relation::Gt : Relation::Lt;
    const Relation weak_h = upper ? Relation::Ge : Relation::Le;
    // Alternative A: beta1 > 0, beta2 >= 0, h strictly signed.
    if (cert->beta1 > margin) {
      cases.push_back({label,
                       {{"beta1", cert->beta1, Relation::Gt, margin},
                        {"beta2", cert->beta2, Relation::Ge, 0.0},
                        {"h", h, strict_h, 0.0},
                        lam}});
    }
    // Alternative B: beta2 > 0, beta1 >= 0, h weakly signed.
    cases.push_back({label,
                     {{"beta2", cert->beta2, Relation::Gt, margin},
                      {"beta1", cert->beta1, Relation::Ge, 0.0},
                      {"h", h, weak_h, 0.0},
                      lam}});
  }
  return decide(cases, std::move(info), "Lemma2.2");
}

Verdict check_lemma38(const LinearFBSDE& f) {
  const CoeffMatrix& c = f.coeffs;
  if (terminal_is_singular(c.s3, f.h)) {
    throw Error(ErrorKind::TerminalSingular, "Lemma 3.8 excludes h = 1/s3");
  }
  const Cubic lp = l_poly(c);
  const double h = f.h;
  const double den = 1.0 - c.s3 * h;
  const double fh = lp(h) / den;
  const bool has_pole = c.s3 != 0.0;
  const double pole = has_pole ? 1.0 / c.s3 : std::numeric_limits<double>::infinity();

  // Zeros of F are the zeros of L away from the pole. L == 0 makes every point a zero.
  const bool all_zero = lp.is_zero();
  std::vector<double> zeros;
  if (!all_zero) {
    for (double r : real_roots(lp)) {
      if (has_pole && std::abs(r - pole) <= 1e-9) continue;
      zeros.push_back(r);
    }
  }
  auto count_in = [&](double lo, double hi) -> double {
    if (all_zero) return 1.0;
    return static_cast<double>(std::count_if(zeros.begin(), zeros.end(),
                                             [&](double r) { return r >= lo && r <= hi; }));
  };
  const double inf = std::numeric_limits<double>::infinity();
  // Without a pole the trajectory can only escape to infinity; a driver of degree
  // <= 1 grows at most exponentially, so the leading-coefficient alternative is
  // restricted to that case.
  const bool linear_growth = has_pole ? lp.c3 == 0.0 : (lp.c3 == 0.0 && lp.c2 == 0.0);

  std::vector<Evidence> info{{"L3", lp.c3}, {"L2", lp.c2}, {"L1", lp.c1}, {"L0", lp.c0}, {"F(h)", fh}};
  for (std::size_t i = 0; i < zeros.size(); ++i) info.push_back({"zero" + std::to_string(i + 1), zeros[i]});

  const Cond below = has_pole ? Cond{"h - 1/s3", h - pole, Relation::Lt, 0.0} : Cond{"s3", c.s3, Relation::Eq, 0.0};
  const Cond above = has_pole ? Cond{"h - 1/s3", h - pole, Relation::Gt, 0.0}
                              : Cond{"s3 (no pole: h never above 1/s3)", c.s3, Relation::Gt, 0.0};
  auto growth = [&](const std::string& side, double count) -> Cond {
    if (count > 0) return {"zeros of F in " + side, count, Relation::Gt, 0.0};
    if (linear_growth) return {"b3*s2-b2*s3", lp.c3, Relation::Eq, 0.0};
    return {"zeros of F in " + side, count, Relation::Gt, 0.0};
  };

  std::vector<Case> cases;
  cases.push_back({"Lemma3.8(i)", {below, {"F(h)", fh, Relation::Le, 0.0}, growth("(-inf,h]", count_in(-inf, h))}});
  cases.push_back({"Lemma3.8(ii)", {above, {"F(h)", fh, Relation::Ge, 0.0}, growth("[h,inf)", count_in(h, inf))}});
  {
    const double cnt = has_pole ? count_in(h, pole) : count_in(h, inf);
    Cond zero_cond{"zeros of F in [h,1/s3]", cnt, Relation::Gt, 0.0};
    if (!has_pole && cnt == 0 && linear_growth) zero_cond = {"b3*s2-b2*s3", lp.c3, Relation::Eq, 0.0};
    cases.push_back({"Lemma3.8(iii)", {below, {"F(h)", fh, Relation::Ge, 0.0}, zero_cond}});
  }
  {
    const double cnt = has_pole ? count_in(pole, h) : 0.0;
    cases.push_back({"Lemma3.8(iv)", {above, {"F(h)", fh, Relation::Le, 0.0}, {"zeros of F in [1/s3,h]", cnt, Relation::Gt, 0.0}}});
  }
  return decide(cases, std::move(info), "Lemma3.8-fail");
}

Verdict check_thm39(const LinearFBSDE& f, const std::string& label) {
  const CoeffMatrix& c = f.coeffs;
  const Cubic lp = l_poly(c);
  const double h = f.h;
  const double one_minus = 1.0 - c.s3 * h;
  const double lh = lp(h);
  const double lead = c.b3 * c.s2 - c.b2 * c.s3;

  std::vector<Evidence> info{{"L(h)", lh}, {"s3", c.s3}, {"L3", lp.c3}, {"L2", lp.c2}, {"L1", lp.c1}, {"L0", lp.c0}};
  std::vector<Case> cases;
  {
    std::vector<Cond> conds{{"1-s3*h", one_minus, Relation::Gt, 0.0},
                            {"b3*s2-b2*s3", lead, Relation::Le, 0.0},
                            {"L(h)*s3", lh * c.s3, Relation::Le, 0.0}};
    // With s3 = 0 and a vanishing cubic term the driver is a quadratic and can
    // blow up in finite time; only the linear case stays covered.
    if (c.s3 == 0.0 && lead == 0.0) conds.push_back({"L2 (s3 = 0, cubic term 0)", lp.c2, Relation::Eq, 0.0});
    cases.push_back({label + "(i)", conds});
  }
  cases.push_back({label + "(ii)",
                   {{"1-s3*h", one_minus, Relation::Lt, 0.0},
                    {"b3*s2-b2*s3", lead, Relation::Ge, 0.0},
                    {"L(h)*s3", lh * c.s3, Relation::Le, 0.0}}});
  if (c.s3 != 0.0) {
    const double lpole = lp(1.0 / c.s3);
    info.push_back({"L(1/s3)", lpole});
    cases.push_back({label + "(iii)",
                     {{"s3", c.s3, Relation::Gt, 0.0}, {"L(1/s3)", lpole, Relation::Le, 0.0}, {"L(h)", lh, Relation::Ge, 0.0}}});
    cases.push_back({label + "(iv)",
                     {{"s3", c.s3, Relation::Lt, 0.0}, {"L(1/s3)", lpole, Relation::Ge, 0.0}, {"L(h)", lh, Relation::Le, 0.0}}});
  } else {
    cases.push_back({label + "(iii)", {{"s3", c.s3, Relation::Gt, 0.0}}});
    cases.push_back({label + "(iv)", {{"s3", c.s3, Relation::Lt, 0.0}}});
  }
  return decide(cases, std::move(info), label);
}

Verdict check_cor52(const LQProblem& lq) {
  if (lq.N == 0.0) throw Error(ErrorKind::NDegenerate, "N must be non-zero");
  const double q = lq.S * lq.S / lq.N - lq.R;
  std::vector<Case> cases{
      {"Cor5.2(i)", {{"N", lq.N, Relation::Gt, 0.0}, {"S*S/N-R", q, Relation::Lt, 0.0}}},
      {"Cor5.2(ii)", {{"N", lq.N, Relation::Lt, 0.0}, {"S*S/N-R", q, Relation::Gt, 0.0}}},
  };
  return decide(cases, {}, "Cor5.2");
}

}  // namespace lfbsde
