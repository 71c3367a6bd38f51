#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lfbsde/core.hpp"
#include "lfbsde/dominating.hpp"
#include "lfbsde/transform.hpp"

namespace lfbsde {

/// Y = u(t) X, Z = z_ratio(t) X with z_ratio = u (s1 + s2 u) / (1 - s3 u).
struct DecouplingField {
  OdeSolution ode;
  std::vector<double> z_ratio;

  double step() const { return ode.step; }
  std::size_t steps() const { return ode.grid.size() - 1; }
};

/// Integrates the dominating ODE; throws Error(NotWellPosedNumerically) unless Bounded.
DecouplingField build_field(const LinearFBSDE& f, double dt);

/// Field from given values of u (used for perturbation tests).
DecouplingField make_field(const CoeffMatrix& c, OdeSolution ode);

/// Per-path normal stream: std::mt19937_64 seeded with seed_seq(seed, path). The
/// k-th draw is always the k-th increment of that path, so results do not depend
/// on the order in which paths are simulated.
class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t path);
  double increment(double sqrt_dt) { return sqrt_dt * normal_(gen_); }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::vector<double> brownian_increments(std::uint64_t seed, std::uint64_t path, std::size_t n, double dt);

struct Stats {
  double mean = 0;
  double mean_abs = 0;
  double max_abs = 0;
  double variance = 0;
  bool operator==(const Stats&) const = default;
};

struct SimResult {
  std::size_t n_paths = 0;
  double dt = 0;
  std::uint64_t seed = 0;
  Stats terminal_residual;  // Y(T) - h X(T)
  /// R = Y(0) - [h X(T) + sum (f1 X + f2 Y + f3 Z) dt - sum Z dW]
  Stats bsde_residual;
  Stats x_terminal;
  Stats y_initial;
  /// Mean over paths of max_t |X(t)|.
  double path_scale = 0;
  std::size_t blown_up = 0;  // paths aborted at |X| > 1e12
  PathEnsemble kept;         // the first `keep_paths` paths

  bool operator==(const SimResult& o) const {
    return n_paths == o.n_paths && dt == o.dt && seed == o.seed && terminal_residual == o.terminal_residual &&
           bsde_residual == o.bsde_residual && x_terminal == o.x_terminal && y_initial == o.y_initial &&
           path_scale == o.path_scale && blown_up == o.blown_up;
  }
};

/// Euler-Maruyama on dX = (b1 + b2 u + b3 z) X dt + (s1 + s2 u + s3 z) X dW with
/// z = z_ratio, on the field's grid.
SimResult simulate(const LinearFBSDE& f, const DecouplingField& field, std::size_t n_paths, std::uint64_t seed,
                   std::size_t keep_paths = 0);

struct BsdeReport {
  double residual_coarse = 0, residual_fine = 0;  // mean |R|
  double bound_coarse = 0, bound_fine = 0;        // 5 (1 + path_scale) sqrt(dt)
  double ratio = 0;                               // coarse / fine
  bool within_bound = false;
  bool converging = false;
  bool pass() const { return within_bound && converging; }
};

/// Bound check on a single run.
bool residual_within_bound(const SimResult& sr);

/// Bound check at both levels plus the dt-halving ratio >= 1.2. A residual that is
/// exactly zero at both levels counts as converging.
BsdeReport verify_bsde(const SimResult& coarse, const SimResult& fine);

/// Builds the field at dt and 2 dt, simulates both with the same seed and verifies.
BsdeReport verify_instance(const LinearFBSDE& f, double dt, std::size_t n_paths, std::uint64_t seed);

/// Solution of a transformed system mapped back to original coordinates.
struct TransformedSolution {
  DecouplingField field;  // of the tilde system
  LinearFBSDE tilde;      // with the closed initial state X~(0)
  SimResult tilde_result;
  PathEnsemble original_paths;  // inverted kept paths
};

TransformedSolution solve_transformed(const TransformedSystem& ts, double dt, std::size_t n_paths,
                                      std::uint64_t seed, std::size_t keep_paths = 0);

/// The field of the original system recovered from the tilde field: at each grid
/// point (X, Y, Z) = inverse_map(1, u~, z~), u = Y / X, z_ratio = Z / X.
DecouplingField field_in_original(const TransformedSystem& ts, const DecouplingField& tilde_field);

/// CSV with header "path_id,t,X,Y,Z".
std::string to_csv(const PathEnsemble& paths);

}  // namespace lfbsde
