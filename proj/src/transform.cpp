#include "lfbsde/transform.hpp"

#include <algorithm>
#include <cmath>

#include "lfbsde/dominating.hpp"

namespace lfbsde {

TransformParams TransformParams::make(double m, double n, double c) {
  if (!std::isfinite(m) || !std::isfinite(n) || !std::isfinite(c)) {
    throw Error(ErrorKind::DegenerateTransform, "transform parameters must be finite");
  }
  const TransformParams p{m, n, c};
  const double scale = std::max({std::abs(m), std::abs(n), 1.0}) * std::abs(c);
  if (c == 0.0 || std::abs(p.det()) <= 1e-10 * scale) {
    throw Error(ErrorKind::DegenerateTransform, "|A| = c (m - n) vanishes");
  }
  return p;
}

std::array<double, 4> TransformParams::inverse() const {
  const double d = det();
  return {a22() / d, -a12() / d, -a21() / d, a11() / d};
}

namespace {

double transform_denominator(const CoeffMatrix& c, const TransformParams& p) {
  const double den = p.a22() + p.a21() * c.s3;
  if (p.det() == 0.0 ||
      std::abs(den) <= 1e-12 * std::max({1.0, std::abs(p.a22()), std::abs(p.a21() * c.s3)})) {
    throw Error(ErrorKind::DegenerateTransform, "a22 + a21 s3 vanishes");
  }
  return den;
}

}  // namespace

CoeffMatrix tilde_coeffs(const CoeffMatrix& c, const TransformParams& p) {
  const double a11 = p.a11(), a12 = p.a12(), a21 = p.a21(), a22 = p.a22();
  const double detA = p.det();
  const double den = transform_denominator(c, p);
  const double full = detA * den;
  const auto& [f1, f2, f3, b1, b2, b3, s1, s2, s3] = c;

  CoeffMatrix t;
  t.b1 = ((a11 * b3 - a12 * f3) * (a21 * a21 * s2 - a21 * a22 * s1) +
          den * (a22 * (a11 * b1 - a12 * f1) - a21 * (a11 * b2 - a12 * f2))) /
         full;
  t.b2 = ((a11 * b3 - a12 * f3) * (a12 * a21 * s1 - a11 * a21 * s2) +
          den * (a11 * (a11 * b2 - a12 * f2) - a12 * (a11 * b1 - a12 * f1))) /
         full;
  t.b3 = (a11 * b3 - a12 * f3) / den;
  t.s1 = ((a11 * s3 + a12) * (a21 * a21 * s2 - a21 * a22 * s1) + den * (a11 * a22 * s1 - a11 * a21 * s2)) / full;
  t.s2 = ((a11 * s3 + a12) * (a12 * a21 * s1 - a11 * a21 * s2) + den * (a11 * a11 * s2 - a11 * a12 * s1)) / full;
  t.s3 = (a11 * s3 + a12) / den;
  t.f1 = ((a21 * b3 - a22 * f3) * (a21 * a22 * s1 - a21 * a21 * s2) +
          den * (a21 * (a21 * b2 - a22 * f2) - a22 * (a21 * b1 - a22 * f1))) /
         full;
  t.f2 = ((a21 * b3 - a22 * f3) * (a11 * a21 * s2 - a12 * a21 * s1) +
          den * (a12 * (a21 * b1 - a22 * f1) - a11 * (a21 * b2 - a22 * f2))) /
         full;
  t.f3 = (a22 * f3 - a21 * b3) / den;
  return t;
}

double tilde_terminal(double h, const TransformParams& p) {
  const double den = p.a11() + p.a12() * h;
  if (std::abs(den) <= 1e-9) throw Error(ErrorKind::TerminalDegenerate, "a11 + a12 h vanishes");
  return (p.a21() + p.a22() * h) / den;
}

Cubic lambda_poly(const CoeffMatrix& c, const TransformParams& p) { return l_poly(tilde_coeffs(c, p)); }

LambdaDiagnostics lambda_diagnostics(const CoeffMatrix& c, const TransformParams& p) {
  LambdaDiagnostics d;
  d.direct = lambda_poly(c, p);
  const Cubic g = l_poly(c);
  const double m = p.m, n = p.n, cc = p.c, s3 = c.s3;
  const double hm = h_poly(c)(m);

  d.lambda0 = hm / (cc * cc * (n - m) * (1 + n * s3));
  d.lambda0_printed = -hm / ((n * cc - m * cc) * (cc + n * cc * s3));
  d.lambda1_printed =
      (3 * g.c3 * m * m * n - g.c2 * (m * m + 2 * m * n) + g.c1 * (2 * m + n) - 3 * g.c0) / ((n - m) * (cc + n * cc * s3));
  d.lambda2_printed = (-3 * g.c3 * m * n * n + g.c2 * (n * n + 2 * m * n)) / ((n - m) * (cc + n * cc * s3)) -
                      (g.c1 * (2 * n + m) - 3 * g.c0) / ((n - m) * (1 + n * s3));
  d.lambda2 = (-3 * g.c3 * m * n * n + g.c2 * (n * n + 2 * m * n) - g.c1 * (2 * n + m) + 3 * g.c0) /
              ((n - m) * (1 + n * s3));

  const double scale = 1.0 + d.direct.scale();
  d.lambda0_ok = std::abs(d.lambda0 - d.direct.c3) <= 1e-8 * scale;
  d.lambda1_ok = std::abs(d.lambda1_printed - d.direct.c2) <= 1e-8 * scale;
  d.lambda2_ok = std::abs(d.lambda2_printed - d.direct.c1) <= 1e-8 * scale;
  d.lambda2_corrected_ok = std::abs(d.lambda2 - d.direct.c1) <= 1e-8 * scale;
  return d;
}

Verdict check_prop42(const LinearFBSDE& tilde) { return check_thm39(tilde, "Prop4.2"); }

TransformedSystem transform_system(const LinearFBSDE& f, const TransformParams& p) {
  TransformedSystem ts;
  ts.params = p;
  ts.original = f;
  ts.tilde.coeffs = tilde_coeffs(f.coeffs, p);
  ts.tilde.h = tilde_terminal(f.h, p);
  ts.tilde.T = f.T;
  ts.x0_relation = {p.det() / p.a22(), p.a12() / p.a22()};
  ts.tilde.x0 = ts.x0_relation[0] * f.x0;
  const CoeffMatrix& c = f.coeffs;
  ts.z_map = {p.a21() * c.s1, p.a21() * c.s2, p.a21() * c.s3 + p.a22()};
  ts.verdict = check_prop42(ts.tilde);
  return ts;
}

double tilde_initial_state(const TransformedSystem& ts, double u0) {
  const double den = 1.0 - ts.x0_relation[1] * u0;
  if (std::abs(den) <= 1e-9) {
    throw Error(ErrorKind::DegenerateTransform, "1 - (a12/a22) u~(0) vanishes");
  }
  return ts.x0_relation[0] * ts.original.x0 / den;
}

namespace {

std::vector<double> ordered_roots(const Cubic& hp) {
  std::vector<double> roots = real_roots(hp);
  std::stable_sort(roots.begin(), roots.end(), [](double a, double b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return a < b;
  });
  return roots;
}

}  // namespace

TransformedSystem synthesize_transform(const LinearFBSDE& f, const SynthesisOptions& opts) {
  std::vector<double> ns;
  if (opts.n) {
    ns.push_back(*opts.n);
  } else if (opts.prefer_decoupling) {
    const Cubic hp = h_poly(f.coeffs);
    if (!hp.is_zero()) ns = ordered_roots(hp);
    if (hp.is_zero()) ns = {0.0};  // every n decouples
    if (ns.empty()) {
      if (opts.strict) throw Error(ErrorKind::NoDecouplingRoot, "H has no real root");
      ns = opts.m_grid.points();
    }
  } else {
    ns = opts.m_grid.points();
  }

  std::vector<Candidate> log;
  for (double n : ns) {
    for (double m : opts.m_grid.points()) {
      if (std::abs(m - n) < 0.05) continue;
      if (std::abs(m + f.h) <= 1e-9) {
        log.push_back({m, n, 0, "TerminalDegenerate"});
        continue;
      }
      for (double c : opts.c_grid) {
        try {
          TransformedSystem ts = transform_system(f, TransformParams::make(m, n, c));
          if (std::abs(ts.tilde.coeffs.s3) < 1e-9) {
            log.push_back({m, n, c, "s3~ = 0"});
            continue;
          }
          if (terminal_is_singular(ts.tilde.coeffs.s3, ts.tilde.h)) {
            log.push_back({m, n, c, "TerminalSingular"});
            continue;
          }
          log.push_back({m, n, c, ts.verdict.well_posed() ? ts.verdict.criterion : "NotDecided"});
          if (ts.verdict.well_posed()) {
            ts.candidates = std::move(log);
            return ts;
          }
        } catch (const Error& e) {
          log.push_back({m, n, c, to_string(e.kind())});
        }
      }
    }
  }
  throw Error(ErrorKind::NoTransformFound,
              "no admissible (m, n, c) among " + std::to_string(log.size()) + " candidates");
}

State3 forward_map(const TransformedSystem& ts, const State3& s) {
  const TransformParams& p = ts.params;
  return {p.a11() * s.X + p.a12() * s.Y, p.a21() * s.X + p.a22() * s.Y,
          ts.z_map[0] * s.X + ts.z_map[1] * s.Y + ts.z_map[2] * s.Z};
}

State3 inverse_map(const TransformedSystem& ts, const State3& s) {
  const auto inv = ts.params.inverse();
  const double x = inv[0] * s.X + inv[1] * s.Y;
  const double y = inv[2] * s.X + inv[3] * s.Y;
  const TransformParams& p = ts.params;
  const CoeffMatrix& c = ts.original.coeffs;
  const double nc = p.n * p.c;
  const double z = (s.Z - nc * c.s1 * x - nc * c.s2 * y) / (nc * c.s3 + p.c);
  return {x, y, z};
}

PathEnsemble invert_solution(const TransformedSystem& ts, const PathEnsemble& tilde_paths) {
  PathEnsemble out;
  out.grid = tilde_paths.grid;
  out.paths.reserve(tilde_paths.paths.size());
  for (const Path& tp : tilde_paths.paths) {
    Path p;
    const std::size_t k = tp.X.size();
    p.X.resize(k);
    p.Y.resize(k);
    p.Z.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      const State3 s = inverse_map(ts, {tp.X[i], tp.Y[i], tp.Z[i]});
      p.X[i] = s.X;
      p.Y[i] = s.Y;
      p.Z[i] = s.Z;
    }
    out.paths.push_back(std::move(p));
  }
  return out;
}

}  // namespace lfbsde
