#pragma once

// Phase locking, Arnold tongue boundaries g-_r(s) <= g+_r(s), and the
// adjacency points where two components of a tongue touch (the period map is
// the identity there).
//
// All boundary work happens on the time section t = pi/2. The equation is
// reversible under (x, t) -> (pi - x, pi - t), whose fixed points on that
// section are x = +-pi/2; a parabolic fixed point of the period map, i.e. a
// tongue boundary, can only sit there. The boundary curves are therefore the
// zero sets of
//
//   D+(a, s) = H(pi/2) - pi/2 - 2 pi r,   D-(a, s) = H(-pi/2) + pi/2 - 2 pi r,
//
// both strictly increasing in a.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "josephson/torus_flow.hpp"

namespace josephson {

inline constexpr double kSymmetricSection = kPi / 2.0;

struct LockingWitness {
  long r = 0;
  double min_dev = 0.0;  // min over x of H(x) - x - 2pi r
  double max_dev = 0.0;
  [[nodiscard]] bool locked() const { return min_dev <= 0.0 && 0.0 <= max_dev; }
};

/// Sampled extrema of H(x) - x - 2pi r on the symmetric section (the sample
/// count is rounded up to a multiple of 4 so that +-pi/2 are nodes), each
/// polished by golden-section search between the neighbouring nodes.
LockingWitness locking_witness(const Params& p, long r, int n_samples = 32,
                               const IntegratorConfig& cfg = torus_integrator_config());

/// (D+, D-) at the given parameters.
std::pair<double, double> symmetric_deviations(const Params& p, long r,
                                               const IntegratorConfig& cfg);

struct TongueSlice {
  long r = 0;
  double s = 0.0;
  double g_minus = 0.0;
  double g_plus = 0.0;
  double width = 0.0;      // NaN when empty
  double signed_gap = 0.0; // root(D+) - root(D-); changes sign at adjacencies
  bool empty = false;      // bracket did not straddle the tongue
  bool verified = false;   // locking predicate agrees at the boundaries
};

/// Default a-bracket for tongue r at ordinate s: Bessel-seeded for |s| > 5,
/// otherwise [r - |nu| - 0.05, r + |nu| + 0.05] (the rotation number always
/// lies within |nu| of a).
std::pair<double, double> default_bracket(long r, double s, double nu);

/// Boundaries of tongue r on the horizontal line at ordinate s, each to
/// absolute tolerance tol_a. An invalid bracket yields empty = true.
TongueSlice boundary_at(long r, double s, double nu, std::pair<double, double> bracket,
                        double tol_a = 1e-8,
                        const IntegratorConfig& cfg = torus_integrator_config(),
                        bool verify = true);

TongueSlice boundary_at(long r, double s, double nu, double tol_a = 1e-8,
                        const IntegratorConfig& cfg = torus_integrator_config(),
                        bool verify = true);

/// One slice per ordinate, plus extra slices bisecting the neighbourhood of
/// every interior width minimum (refine_levels times). Output is sorted by s.
/// Slices are checked against the locking predicate only when `verify` is set.
std::vector<TongueSlice> width_function(long r, double nu, const std::vector<double>& s_grid,
                                        int refine_levels = 2, double tol_a = 1e-8,
                                        Execution exec = Execution::kParallel,
                                        bool verify = false);

struct Adjacency {
  long r = 0;
  double a = 0.0;
  double s = 0.0;
  double identity_residual = 0.0;   // max |H(x) - x - 2pi r|
  double abscissa_residual = 0.0;   // distance from a to the nearest integer
  int newton_iterations = 0;
};

struct RefinementFailure {
  long r = 0;
  double a_guess = 0.0;
  double s_guess = 0.0;
  std::string reason;
};

struct AdjacencySearch {
  std::vector<Adjacency> found;          // sorted by s
  std::vector<RefinementFailure> failures;
};

struct AdjacencyOptions {
  double scan_step = 0.1;        // s-grid spacing for the width scan
  double width_threshold = 0.05; // candidates: local width minima below this
  double identity_tol = 1e-6;    // confirmation threshold
  int identity_samples = 32;
  int max_newton = 60;
};

/// Locates adjacencies of tongue r with ordinate in (s_lo, s_hi). Points with
/// |s| below 1e-6 are never reported (the s = 0 touching point is not an
/// adjacency).
AdjacencySearch find_adjacencies(long r, double nu, std::pair<double, double> s_range,
                                 double tol = 1e-6, const AdjacencyOptions& opts = {},
                                 Execution exec = Execution::kParallel);

/// Damped Newton on (D+, D-) from an initial guess. Step capped at 0.1 in
/// each coordinate; finite-difference Jacobian.
std::optional<Adjacency> refine_adjacency(long r, double nu, double a_guess, double s_guess,
                                          const AdjacencyOptions& opts, std::string* reason);

}  // namespace josephson
