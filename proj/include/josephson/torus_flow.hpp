#pragma once

// The forced pendulum-type equation on the torus
//
//   dx/dt = nu sin x + a + s sin t,
//
// its period-2pi map lifted to the real line, and the rotation number
// (normalized so that a rigid rotation by angle theta has rotation number
// theta / 2pi).

#include <optional>
#include <vector>

#include "josephson/ode.hpp"

namespace josephson {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383280;

enum class Execution { kSerial, kParallel };

struct Params {
  double nu = 1.0;
  double a = 0.0;
  double s = 0.0;

  /// Throws std::invalid_argument when nu == 0 or a value is not finite.
  void validate() const;
};

/// Default tolerances used throughout the torus computations.
IntegratorConfig torus_integrator_config();

/// dx/dt at (t, x).
inline double torus_field(const Params& p, double t, double x) {
  return p.nu * std::sin(x) + p.a + p.s * std::sin(t);
}

struct PeriodValue {
  double value = 0.0;       // H(x)
  double derivative = 0.0;  // H'(x) from the variational equation
  double error = 0.0;       // accumulated local error estimate
};

/// H(x): the solution starting at x at time `section` evaluated at
/// section + 2pi, on the universal cover.
double period_map(const Params& p, double x, const IntegratorConfig& cfg,
                  double section = 0.0);

PeriodValue period_map_with_derivative(const Params& p, double x,
                                       const IntegratorConfig& cfg,
                                       double section = 0.0);

/// The lifted period map sampled on an equispaced grid over one period of x,
/// evaluated in between by monotone cubic Hermite interpolation. Slopes come
/// from the variational equation and are limited (Fritsch-Carlson) only
/// where they would break monotonicity.
class LiftMap {
 public:
  static LiftMap sample(const Params& p, int n_samples, const IntegratorConfig& cfg,
                        double section = 0.0, Execution exec = Execution::kParallel);

  /// The same map on twice as many nodes; only the new midpoints are integrated.
  [[nodiscard]] LiftMap refined(const IntegratorConfig& cfg,
                                Execution exec = Execution::kParallel) const;

  [[nodiscard]] const Params& params() const { return params_; }
  [[nodiscard]] double section() const { return section_; }
  [[nodiscard]] int size() const { return static_cast<int>(nodes_.size()); }
  [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] const std::vector<double>& slopes() const { return slopes_; }
  /// Largest integration error estimate over the samples.
  [[nodiscard]] double integration_error() const { return integration_error_; }

  /// Interpolated H(x) for any real x, using H(x + 2pi) = H(x) + 2pi.
  [[nodiscard]] double operator()(double x) const;

  /// min and max over x of the interpolant of H(x) - x, including the
  /// interior extrema of every cubic piece.
  [[nodiscard]] std::pair<double, double> deviation_range() const;

 private:
  Params params_;
  double section_ = 0.0;
  double step_ = 0.0;
  double integration_error_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  std::vector<double> raw_slopes_;  // before limiting
  std::vector<double> errors_;

  void finish();
};

struct RotationOptions {
  int initial_samples = 64;
  int max_samples = 1024;
  int min_periods = 2000;  // first averaging length; doubled up to max_periods
  double tol = 1e-9;
};

struct RotationResult {
  double rho = 0.0;
  long iterations = 0;           // lift iterates used by the weighted average
  /// Error estimate for rho. Zero for a certified lock (integrated samples
  /// of H(x) - x - 2pi r of both signs beyond their integration error).
  double residual = 0.0;
  std::optional<long> locked_at;
  bool converged = true;
  int samples = 0;               // LiftMap resolution that produced rho
};

/// Rotation number from the sampled lift. Locking (a zero of
/// H(x) - x - 2pi r) takes precedence and yields rho = r exactly; otherwise a
/// smooth-weighted Birkhoff average is computed. The averaging length is
/// doubled from opts.min_periods up to max_periods until two lengths agree,
/// and the sample count doubled until two resolutions agree.
RotationResult rotation_number(const Params& p, const IntegratorConfig& cfg,
                               int max_periods = 1 << 18,
                               const RotationOptions& opts = {},
                               Execution exec = Execution::kParallel);

/// Weighted Birkhoff average of the increments of an orbit of `map`,
/// starting at x0. Weight is the bump exp(-1 / (t (1 - t))).
template <class Map>
double weighted_birkhoff_rotation(Map&& map, double x0, int periods) {
  double num = 0.0, den = 0.0;
  double x = x0;
  for (int k = 0; k < periods; ++k) {
    const double t = (k + 0.5) / periods;
    const double w = std::exp(-1.0 / (t * (1.0 - t)));
    const double y = map(x);
    num += w * (y - x);
    den += w;
    x = y;
  }
  return num / den / kTwoPi;
}

/// Rotation number from an orbit of the ODE itself (no interpolation).
/// Slower; used to cross-check the lift-based estimate.
double rotation_number_orbit(const Params& p, const IntegratorConfig& cfg,
                             int periods, double x0 = 0.0);

struct IdentityTest {
  bool identity = false;
  double max_deviation = 0.0;  // max |H(x) - x - 2pi r|
  long r = 0;
};

/// Tests whether the period map is a translation by 2pi r, r the nearest
/// integer to the mean displacement.
IdentityTest is_identity_map(const Params& p, double tol, int n_samples,
                             const IntegratorConfig& cfg = torus_integrator_config());

}  // namespace josephson
