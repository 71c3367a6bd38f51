#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lfbsde/core.hpp"
#include "lfbsde/criteria.hpp"
#include "lfbsde/solver.hpp"
#include "lfbsde/transform.hpp"

namespace lfbsde {

/// u = kx x + ky y + kz z
struct OptimalControlLaw {
  double kx = 0, ky = 0, kz = 0;
};

/// Stochastic Hamiltonian system of the LQ problem:
///   b = (A - B S/N, -B B/N, -B D/N), s = (C - D S/N, -D B/N, -D D/N),
///   f = (R - S S/N, A - S B/N, C - S D/N), h = Q.
/// Throws Error(NDegenerate) when N = 0.
LinearFBSDE build_hamiltonian(const LQProblem& lq);

/// (-S/N, -B/N, -D/N); throws Error(NDegenerate) when N = 0.
OptimalControlLaw optimal_law(const LQProblem& lq);

/// The worked example's Hamiltonian system exactly as printed:
/// f = (5, 3, 5), b = (3, 1, -2), s = (5, 2, 4), h = -4, with x0 and T from lq.
LinearFBSDE printed_example_fbsde(const LQProblem& lq);

/// Entries where `used` differs from build_hamiltonian(lq), e.g. "b3: used -2.000000, built from LQ data 2.000000".
std::vector<std::string> construction_discrepancies(const LQProblem& lq, const LinearFBSDE& used);

/// The worked example's transform choice: n = real root of H nearest -0.658, m = 1, c = 1.
SynthesisOptions printed_example_synthesis(const LinearFBSDE& f);

struct LqOptions {
  bool use_printed_fbsde = false;
  double dt = 1e-3;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 7;
  std::size_t keep_paths = 0;
  SynthesisOptions synthesis;
};

struct LqSolution {
  LinearFBSDE fbsde;
  OptimalControlLaw law;
  /// Monotonicity, Lemma 3.8, Thm 3.9, Cor 5.2 and (when taken) Prop 4.2, in order.
  std::vector<Verdict> chain;
  std::string route;  // criterion that justified the solve
  std::optional<TransformedSystem> transform;
  SimResult sim;          // of the system actually simulated (tilde system on the transform route)
  DecouplingField field;  // in original coordinates
  PathEnsemble paths;     // kept (x, y, z) paths in original coordinates
  std::vector<std::vector<double>> controls;  // u along the kept paths
  std::vector<std::string> diagnostics;
};

/// Builds the Hamiltonian system, runs the criteria, transforms when no checkable
/// criterion (monotonicity, Thm 3.9, Cor 5.2) fires, solves and maps back.
/// Throws Error(Unsolvable) when nothing applies.
LqSolution solve_lq(const LQProblem& lq, const LqOptions& opts = {});

/// Feedback gain K(t) with u = K(t) x along the solution: kx + ky u(t) + kz z_ratio(t).
std::vector<double> feedback_gains(const OptimalControlLaw& law, const DecouplingField& field);

struct Direction {
  std::string name;
  std::function<double(double t, double T)> v;
};

/// v = 1, v = t/T, and the square wave +1 on [0, T/2), -1 after.
std::vector<Direction> default_directions();

struct StationarityRow {
  std::string direction;
  double eps = 0;
  double j_plus = 0, j_minus = 0;
  double difference = 0;  // |J(u + eps v) - J(u - eps v)|
  double derivative = 0;  // difference / (2 eps)
  double threshold = 0;   // 10 eps max(1, |J(u)|)
  bool pass = false;
};

struct StationarityReport {
  double j0 = 0;
  std::vector<StationarityRow> rows;
  /// difference(eps_k) / difference(eps_{k+1}) per direction, consecutive eps pairs.
  std::vector<std::pair<std::string, double>> ratios;
  bool pass = false;
};

/// Simulates the controlled state under u = K(t) x(t) + eps v(t) (x the unperturbed
/// path), with common random numbers across all eps and directions, and evaluates
/// J by a left-point Riemann sum plus the exact terminal term 1/2 Q x(T)^2.
/// `gains` lives on a uniform grid over [0, T] with gains.size() - 1 steps.
StationarityReport stationarity_check(const LQProblem& lq, const std::vector<double>& gains,
                                      const std::vector<double>& eps, const std::vector<Direction>& directions,
                                      std::size_t n_paths, std::uint64_t seed);

}  // namespace lfbsde
