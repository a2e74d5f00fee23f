#pragma once

// Complex side of the torus equation. With p = e^{ix}, tau = e^{it} the
// equation becomes the Riccati equation
//
//   dp/dtau = ( nu (1 - p^2) i tau / 2 + (a tau + i s (1 - tau^2) / 2) p ) / tau^2,
//
// the projectivization (p = z2 / z1) of the linear system dz/dtau = A(tau) z / tau^2,
//
//   A(tau) = [[0, i nu tau / 2], [i nu tau / 2, i s (1 - tau^2) / 2 + a tau]].
//
// The period map of the torus equation is the Moebius action of the
// monodromy of the linear system around tau = 0.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "josephson/ode.hpp"
#include "josephson/torus_flow.hpp"

namespace josephson {

struct Mat2 {
  std::array<cplx, 4> m{};  // row-major
  cplx& operator()(int i, int j) { return m[2 * i + j]; }
  const cplx& operator()(int i, int j) const { return m[2 * i + j]; }
  static Mat2 identity() { return {{cplx(1), cplx(0), cplx(0), cplx(1)}}; }
  [[nodiscard]] cplx det() const { return m[0] * m[3] - m[1] * m[2]; }
  [[nodiscard]] cplx trace() const { return m[0] + m[3]; }
};

Mat2 operator*(const Mat2& x, const Mat2& y);
/// max |x_ij - y_ij|
double max_abs_diff(const Mat2& x, const Mat2& y);

/// A(tau) / tau^2, the coefficient matrix of the linear system.
Mat2 linear_coefficient(const Params& p, cplx tau);

/// dp/dtau of the Riccati equation.
cplx riccati_rhs(const Params& p, cplx tau, cplx value);

/// dq/dtau for q = 1/p (the chart at p = infinity). Equals riccati_rhs with
/// (a, s) replaced by (-a, -s).
cplx riccati_rhs_reciprocal(const Params& p, cplx tau, cplx q);

/// A point of the Riemann sphere.
struct ProjPoint {
  cplx value{};
  bool infinite = false;
  static ProjPoint infinity() { return {cplx(0), true}; }
  /// 1/value, with 0 <-> infinity.
  [[nodiscard]] ProjPoint reciprocal() const;
  [[nodiscard]] double modulus() const;  // +inf at infinity
};

/// Chordal distance on the Riemann sphere (at most 1).
double chordal_distance(ProjPoint x, ProjPoint y);

/// (M21 + M22 p) / (M11 + M12 p).
ProjPoint mobius_apply(const Mat2& m, ProjPoint p);

struct Monodromy {
  Mat2 matrix = Mat2::identity();
  cplx base_point{1.0, 0.0};
  double integration_error = 0.0;
  double projective_deviation = 0.0;
  double det_deviation = 0.0;  // |det M - e^{2 pi i a}|
};

/// max(|M12|, |M21|, |M11/M22 - 1|) after dividing M by its larger diagonal
/// modulus; zero exactly for scalar matrices.
double projective_deviation(const Mat2& m);

/// Fundamental matrix of the linear system continued once counterclockwise
/// around |tau| = 1 starting from the identity at tau = 1.
Monodromy monodromy(const Params& p, const IntegratorConfig& cfg = {});

// ---------------------------------------------------------------------------
// Canonical solutions psi_1 (psi_1(0) = 0) and psi_2 (psi_2(0) = infinity).

enum class Canonical { kPsi1 = 1, kPsi2 = 2 };

struct CanonicalSolution {
  Canonical which = Canonical::kPsi1;
  /// Power series in tau; for psi_2 it is the series of 1/psi_2.
  std::vector<cplx> series_coefficients;
  int truncation_order = 0;
  double seed_radius = 0.0;
  double seed_agreement = 0.0;        // |S_N - S_{N+10}| at the seed radius
  std::vector<double> circle_angles;  // angles of circle_values
  std::vector<ProjPoint> circle_values;
  double closure_error = 0.0;         // chordal gap after one full turn
  double ray_consistency = 0.0;       // max chordal gap ray end vs circle value
};

enum class CanonicalErrorKind { kRecurrenceSingular, kSeedInaccurate, kWindingNotIntegral };

class CanonicalError : public std::runtime_error {
 public:
  CanonicalError(CanonicalErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] CanonicalErrorKind kind() const noexcept { return kind_; }

 private:
  CanonicalErrorKind kind_;
};

/// Formal power series solution with value 0 at tau = 0 (which = 1), or the
/// series of the reciprocal 1/psi_2 (which = 2), up to tau^order.
CanonicalSolution canonical_series(const Params& p, Canonical which, int order);

/// Sum of the series at tau (chart value: psi_1, or 1/psi_2).
cplx evaluate_series(const std::vector<cplx>& coefficients, cplx tau);

struct SeedChoice {
  double radius = 0.0;
  double agreement = 0.0;
  bool accepted = false;
};

/// Largest radius from {0.2, 0.15, 0.1, 0.07, 0.05, 0.03, 0.02, 0.01} at
/// which the truncations of order `order` and `order + 10` agree to `tol`
/// on 16 points of the circle.
SeedChoice choose_seed_radius(const Params& p, Canonical which, int order, double tol = 1e-9);

struct ContinuationOptions {
  int circle_samples = 256;
  int rays = 9;              // odd; fanned across the sector where the seed is stable
  double seed_tol = 1e-9;
  double chart_switch = 10.0;
};

/// Continues the canonical solution from its seed circle out to |tau| = 1
/// along rays in the half plane where the other Riccati solutions are
/// repelled from it, then once around |tau| = 1. Fills circle_values.
CanonicalSolution continue_canonical(const CanonicalSolution& sol, const Params& p,
                                     const IntegratorConfig& cfg = {},
                                     const ContinuationOptions& opts = {});

struct PoleCount {
  int count = 0;                 // poles in the open unit disk
  double contour_residual = 0.0; // distance of the raw winding to an integer
  double raw_winding = 0.0;      // outer minus inner winding of z1
  double quadrature_count = 0.0; // (i nu / 2) * mean of psi_1 over |tau| = 1
};

/// Poles of psi_1 in the unit disk as zeros of z1, where z = (z1, z2) solves
/// the linear system with z2 / z1 = psi_1. Requires continued values.
PoleCount count_poles_unit_disk(const CanonicalSolution& sol, const Params& p,
                                const IntegratorConfig& cfg = {});

struct BranchReport {
  bool evaluated = false;
  bool holds = false;
  int count = 0;             // poles of psi_1 / zeros of psi_2 in the disk
  double min_modulus = 0.0;  // over |tau| = 1
  double max_modulus = 0.0;
  double closure_error = 0.0;
  std::string error;         // non-empty if the branch could not be evaluated
};

struct ConditionStar {
  bool holds = false;
  int branch = 0;            // 1, 2, or 0 when neither holds
  BranchReport psi1;
  BranchReport psi2;
  /// a - 2 #poles when |psi_1| <= 1 on the circle, else a + 2 #zeros when
  /// |psi_2| >= 1 there.
  std::optional<double> rho_from_poles;
};

/// Either psi_1 has no poles in the unit disk and |psi_1| <= 1 on its
/// boundary, or psi_2 has no zeros there and |psi_2| >= 1.
ConditionStar condition_star(const Params& p, const IntegratorConfig& cfg = {},
                             const ContinuationOptions& opts = {}, int order = 20);

/// Integrates the Riccati equation once around |tau| = 1 starting from
/// `start` at tau = e^{i theta0}, with chart switching; returns samples at
/// theta0 + 2 pi k / samples, k = 0..samples.
std::vector<ProjPoint> riccati_circle(const Params& p, ProjPoint start, double theta0,
                                      int samples, const IntegratorConfig& cfg,
                                      double chart_switch = 10.0);

}  // namespace josephson
