#pragma once

// Adaptive Dormand-Prince 5(4) integration for real and complex states.
//
// The stepper itself only knows real vectors. Complex systems are stepped as
// real vectors of twice the dimension (std::complex<double> is layout
// compatible with double[2]), and complex-time problems are pulled back to a
// real parameter u in [0, 1] along a circle or a ray.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace josephson {

using cplx = std::complex<double>;

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 1e-2;
  long max_steps = 2'000'000;
  double min_step = 1e-13;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  /// Same config with both tolerances scaled by `factor`.
  [[nodiscard]] IntegratorConfig scaled(double factor) const {
    IntegratorConfig c = *this;
    c.rel_tol *= factor;
    c.abs_tol *= factor;
    return c;
  }
};

enum class OdeErrorKind { kStepUnderflow, kMaxStepsExceeded, kNonFinite };

class OdeError : public std::runtime_error {
 public:
  OdeError(OdeErrorKind kind, const std::string& what, double t)
      : std::runtime_error(what), kind_(kind), t_(t) {}
  [[nodiscard]] OdeErrorKind kind() const noexcept { return kind_; }
  /// Time at which the integrator gave up.
  [[nodiscard]] double time() const noexcept { return t_; }

 private:
  OdeErrorKind kind_;
  double t_;
};

struct IntegrationResult {
  std::vector<double> state;
  double error_estimate = 0.0;  // sum of accepted local error norms (absolute)
  long steps = 0;
  double t_end = 0.0;           // differs from t1 only when an observer stopped
  bool stopped = false;
};

using RealRhs =
    std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct OdeProblem {
  RealRhs right_hand_side;
  double t0 = 0.0;
  double t1 = 0.0;
  std::vector<double> y0;
  [[nodiscard]] std::size_t dimension() const { return y0.size(); }
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0,
                        kC5 = 8.0 / 9.0;
inline constexpr double kA21 = 1.0 / 5.0;
inline constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
inline constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
inline constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                        kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
inline constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                        kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                        kA65 = -5103.0 / 18656.0;
inline constexpr double kA71 = 35.0 / 384.0, kA73 = 500.0 / 1113.0,
                        kA74 = 125.0 / 192.0, kA75 = -2187.0 / 6784.0,
                        kA76 = 11.0 / 84.0;
// Difference between the 5th-order weights and the embedded 4th-order ones.
inline constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0,
                        kE4 = 71.0 / 1920.0, kE5 = -17253.0 / 339200.0,
                        kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

}  // namespace detail

/// Integrates dy/dt = f(t, y) from t0 to t1 (either direction).
///
/// `observer(t, y)` is called after every accepted step; returning false stops
/// the integration there (the result then has stopped = true and t_end = t).
template <class Rhs, class Observer>
IntegrationResult integrate_dopri5(Rhs&& f, double t0, double t1,
                                   std::vector<double> y0,
                                   const IntegratorConfig& cfg,
                                   Observer&& observer) {
  const std::size_t n = y0.size();
  if (n == 0) throw std::invalid_argument("integrate: empty state");
  if (!(t1 != t0)) throw std::invalid_argument("integrate: t0 == t1");
  for (double v : y0) {
    if (!std::isfinite(v)) throw OdeError(OdeErrorKind::kNonFinite, "integrate: non-finite y0", t0);
  }

  using namespace detail;
  std::vector<double> y = std::move(y0), ynew(n), tmp(n), k1(n), k2(n), k3(n),
                      k4(n), k5(n), k6(n), k7(n);
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span_len = std::abs(t1 - t0);
  double t = t0;
  double h = std::min(cfg.initial_step, span_len);
  double err_old = 1e-4;
  bool rejected = false;

  IntegrationResult out;
  f(t, std::span<const double>(y), std::span<double>(k1));

  while (dir * (t1 - t) > 0.0) {
    if (out.steps >= cfg.max_steps) {
      throw OdeError(OdeErrorKind::kMaxStepsExceeded, "integrate: max steps exceeded", t);
    }
    bool last = false;
    if (h >= std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      last = true;
    }
    if (h < cfg.min_step && !last) {
      throw OdeError(OdeErrorKind::kStepUnderflow, "integrate: step size underflow", t);
    }
    const double hs = dir * h;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * kA21 * k1[i];
    f(t + kC2 * hs, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (kA31 * k1[i] + kA32 * k2[i]);
    f(t + kC3 * hs, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    f(t + kC4 * hs, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
    f(t + kC5 * hs, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] +
                            kA64 * k4[i] + kA65 * k5[i]);
    f(t + hs, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + hs * (kA71 * k1[i] + kA73 * k3[i] + kA74 * k4[i] +
                             kA75 * k5[i] + kA76 * k6[i]);
    f(t + hs, ynew, k7);

    double err_sq = 0.0;
    double err_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = hs * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] +
                             kE5 * k5[i] + kE6 * k6[i] + kE7 * k7[i]);
      const double sc =
          cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err_sq += (e / sc) * (e / sc);
      err_abs = std::max(err_abs, std::abs(e));
    }
    double err = std::sqrt(err_sq / static_cast<double>(n));
    if (!std::isfinite(err)) {
      // Blow-up inside the stage evaluations; shrink hard and retry.
      h *= 0.1;
      rejected = true;
      continue;
    }

    if (err <= 1.0) {
      // PI step control (Hairer-Wanner constants).
      double fac = 0.9 * std::pow(err, -0.7 / 5.0) * std::pow(err_old, 0.4 / 5.0);
      if (err == 0.0) fac = 10.0;
      fac = std::clamp(fac, 0.2, 10.0);
      if (rejected) fac = std::min(fac, 1.0);
      err_old = std::max(err, 1e-4);
      rejected = false;

      t = last ? t1 : t + hs;
      y.swap(ynew);
      k1.swap(k7);  // FSAL
      out.error_estimate += err_abs;
      ++out.steps;
      h *= fac;
      if (!observer(t, std::span<const double>(y))) {
        out.stopped = !last;
        break;
      }
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      rejected = true;
    }
  }
  out.state = std::move(y);
  out.t_end = t;
  return out;
}

template <class Rhs>
IntegrationResult integrate_dopri5(Rhs&& f, double t0, double t1,
                                   std::vector<double> y0,
                                   const IntegratorConfig& cfg) {
  return integrate_dopri5(std::forward<Rhs>(f), t0, t1, std::move(y0), cfg,
                          [](double, std::span<const double>) { return true; });
}

/// Type-erased entry point over an OdeProblem.
IntegrationResult integrate(const OdeProblem& problem, const IntegratorConfig& cfg);

// ---------------------------------------------------------------------------
// Complex states and complex-time paths.

inline std::span<const cplx> as_complex(std::span<const double> v) {
  return {reinterpret_cast<const cplx*>(v.data()), v.size() / 2};
}
inline std::span<cplx> as_complex(std::span<double> v) {
  return {reinterpret_cast<cplx*>(v.data()), v.size() / 2};
}
std::vector<double> to_real(std::span<const cplx> z);
std::vector<cplx> to_complex(std::span<const double> v);

/// dz/dtau = g(tau, z) for complex tau.
using ComplexRhs =
    std::function<void(cplx tau, std::span<const cplx> z, std::span<cplx> dz)>;

/// tau(u) = radius * exp(i (theta0 + u (theta1 - theta0))).
struct CirclePath {
  double radius = 1.0;
  double theta0 = 0.0;
  double theta1 = 2.0 * 3.14159265358979323846;
};

/// tau(u) = (r0 + u (r1 - r0)) * exp(i angle).
struct RayPath {
  double angle = 0.0;
  double r0 = 0.0;
  double r1 = 1.0;
};

using Path = std::variant<CirclePath, RayPath>;

cplx path_point(const Path& path, double u);
cplx path_velocity(const Path& path, double u);

struct PathResult {
  std::vector<cplx> state;
  double error_estimate = 0.0;
  long steps = 0;
};

/// Integrates dz/dtau = g(tau, z) along the path from u = 0 to u = 1,
/// via the chain rule dz/du = g(tau(u), z) * tau'(u).
PathResult integrate_path(const ComplexRhs& rhs, const Path& path,
                          std::span<const cplx> z0, const IntegratorConfig& cfg);

/// As integrate_path, returning the state at u = k / segments for
/// k = 0..segments (segments + 1 entries).
std::vector<std::vector<cplx>> integrate_path_sampled(
    const ComplexRhs& rhs, const Path& path, std::span<const cplx> z0,
    int segments, const IntegratorConfig& cfg, double* error_estimate = nullptr);

}  // namespace josephson
