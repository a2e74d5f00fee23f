#include "josephson/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace josephson {

namespace {
constexpr cplx kI{0.0, 1.0};
}  // namespace

Mat2 operator*(const Mat2& x, const Mat2& y) {
  Mat2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j);
  return out;
}

double max_abs_diff(const Mat2& x, const Mat2& y) {
  double d = 0.0;
  for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(x.m[k] - y.m[k]));
  return d;
}

Mat2 linear_coefficient(const Params& p, cplx tau) {
  const cplx inv2 = 1.0 / (tau * tau);
  const cplx off = kI * p.nu * tau / 2.0;
  const cplx diag = kI * p.s / 2.0 * (1.0 - tau * tau) + p.a * tau;
  return {{cplx(0), off * inv2, off * inv2, diag * inv2}};
}

cplx riccati_rhs(const Params& p, cplx tau, cplx v) {
  return (p.nu * (1.0 - v * v) * kI * tau / 2.0 +
          (p.a * tau + kI * p.s * (1.0 - tau * tau) / 2.0) * v) /
         (tau * tau);
}

cplx riccati_rhs_reciprocal(const Params& p, cplx tau, cplx q) {
  return (p.nu * (1.0 - q * q) * kI * tau / 2.0 -
          (p.a * tau + kI * p.s * (1.0 - tau * tau) / 2.0) * q) /
         (tau * tau);
}

ProjPoint ProjPoint::reciprocal() const {
  if (infinite) return {cplx(0), false};
  if (value == cplx(0)) return infinity();
  return {1.0 / value, false};
}

double ProjPoint::modulus() const {
  return infinite ? std::numeric_limits<double>::infinity() : std::abs(value);
}

double chordal_distance(ProjPoint x, ProjPoint y) {
  if (x.infinite && y.infinite) return 0.0;
  if (x.infinite) std::swap(x, y);
  if (y.infinite) return 1.0 / std::sqrt(1.0 + std::norm(x.value));
  return std::abs(x.value - y.value) /
         (std::sqrt(1.0 + std::norm(x.value)) * std::sqrt(1.0 + std::norm(y.value)));
}

ProjPoint mobius_apply(const Mat2& m, ProjPoint p) {
  cplx num, den;
  if (p.infinite) {
    num = m(1, 1);
    den = m(0, 1);
  } else {
    num = m(1, 0) + m(1, 1) * p.value;
    den = m(0, 0) + m(0, 1) * p.value;
  }
  if (den == cplx(0)) return ProjPoint::infinity();
  return {num / den, false};
}

double projective_deviation(const Mat2& m) {
  const double scale = std::max(std::abs(m(0, 0)), std::abs(m(1, 1)));
  if (scale == 0.0) return std::numeric_limits<double>::infinity();
  const double ratio = std::abs(m(0, 0) / m(1, 1) - 1.0);
  return std::max({std::abs(m(0, 1)) / scale, std::abs(m(1, 0)) / scale,
                   std::isfinite(ratio) ? ratio : std::numeric_limits<double>::infinity()});
}

Monodromy monodromy(const Params& p, const IntegratorConfig& cfg) {
  p.validate();
  auto rhs = [&p](cplx tau, std::span<const cplx> z, std::span<cplx> dz) {
    const Mat2 c = linear_coefficient(p, tau);
    for (int j = 0; j < 2; ++j) {
      dz[j] = c(0, 0) * z[j] + c(0, 1) * z[2 + j];
      dz[2 + j] = c(1, 0) * z[j] + c(1, 1) * z[2 + j];
    }
  };
  const Mat2 id = Mat2::identity();
  auto res = integrate_path(rhs, CirclePath{1.0, 0.0, kTwoPi}, id.m, cfg);
  Monodromy out;
  std::copy(res.state.begin(), res.state.end(), out.matrix.m.begin());
  out.integration_error = res.error_estimate;
  out.projective_deviation = projective_deviation(out.matrix);
  out.det_deviation = std::abs(out.matrix.det() - std::polar(1.0, kTwoPi * p.a));
  return out;
}

// ---------------------------------------------------------------------------
// Riccati continuation with two charts.

namespace {

struct ChartState {
  cplx v{};
  bool reciprocal = false;
  [[nodiscard]] ProjPoint point() const {
    if (!reciprocal) return {v, false};
    return ProjPoint{v, false}.reciprocal();
  }
  static ChartState from(ProjPoint x) {
    if (x.infinite) return {cplx(0), true};
    if (std::abs(x.value) > 1.0) return {1.0 / x.value, true};
    return {x.value, false};
  }
};

ChartState riccati_segment(const Params& p, const Path& path, double u0, double u1,
                           ChartState state, const IntegratorConfig& cfg, double chart_switch) {
  double u = u0;
  for (int switches = 0; switches < 100000; ++switches) {
    const bool recip = state.reciprocal;
    auto rhs = [&](double uu, std::span<const double> y, std::span<double> dy) {
      const cplx tau = path_point(path, uu);
      const cplx v{y[0], y[1]};
      const cplx d = (recip ? riccati_rhs_reciprocal(p, tau, v) : riccati_rhs(p, tau, v)) *
                     path_velocity(path, uu);
      dy[0] = d.real();
      dy[1] = d.imag();
    };
    auto observer = [chart_switch](double, std::span<const double> y) {
      return std::hypot(y[0], y[1]) <= chart_switch;
    };
    auto res = integrate_dopri5(rhs, u, u1, std::vector<double>{state.v.real(), state.v.imag()},
                                cfg, observer);
    state.v = {res.state[0], res.state[1]};
    if (!res.stopped) return state;
    u = res.t_end;
    state.v = 1.0 / state.v;
    state.reciprocal = !state.reciprocal;
  }
  throw std::runtime_error("riccati continuation: too many chart switches");
}

// Stable direction for the continuation of psi_1: other solutions are
// repelled from psi_1 going outward along rays with s sin(phi) < 0.
double stable_angle(const Params& p) { return p.s > 0.0 ? -kPi / 2.0 : kPi / 2.0; }

Params mirrored(const Params& p) { return {p.nu, -p.a, -p.s}; }

}  // namespace

std::vector<ProjPoint> riccati_circle(const Params& p, ProjPoint start, double theta0,
                                      int samples, const IntegratorConfig& cfg,
                                      double chart_switch) {
  const Path path = CirclePath{1.0, theta0, theta0 + kTwoPi};
  std::vector<ProjPoint> out;
  out.reserve(samples + 1);
  out.push_back(start);
  ChartState state = ChartState::from(start);
  for (int k = 0; k < samples; ++k) {
    state = riccati_segment(p, path, static_cast<double>(k) / samples,
                            static_cast<double>(k + 1) / samples, state, cfg, chart_switch);
    out.push_back(state.point());
    state = ChartState::from(out.back());
  }
  return out;
}

CanonicalSolution canonical_series(const Params& p, Canonical which, int order) {
  p.validate();
  if (p.s == 0.0) {
    throw CanonicalError(CanonicalErrorKind::kRecurrenceSingular,
                         "canonical_series: recurrence is singular at s = 0");
  }
  if (order < 2) throw std::invalid_argument("canonical_series: order < 2");
  // The reciprocal of psi_2 solves the same equation with (a, s) negated.
  const Params q = which == Canonical::kPsi1 ? p : mirrored(p);

  // Matching tau^n in tau^2 c' = (i nu tau / 2)(1 - c^2) + (a tau + i s (1 - tau^2)/2) c:
  // (i s / 2) c_n = (n - 1 - a) c_{n-1} + (i s / 2) c_{n-2}
  //                 + (i nu / 2) sum_{j+k=n-1} c_j c_k - (i nu / 2) [n = 1].
  std::vector<cplx> c(order + 1, cplx(0));
  const cplx half_is = kI * q.s / 2.0;
  const cplx half_inu = kI * q.nu / 2.0;
  for (int n = 1; n <= order; ++n) {
    cplx conv = 0.0;
    for (int j = 0; j <= n - 1; ++j) conv += c[j] * c[n - 1 - j];
    cplx rhs = (static_cast<double>(n - 1) - q.a) * c[n - 1] + half_inu * conv;
    if (n >= 2) rhs += half_is * c[n - 2];
    if (n == 1) rhs -= half_inu;
    // Divide by i s / 2 as (-2i rhs) / s: the only rounding is the real division.
    c[n] = (-2.0 * kI * rhs) / q.s;
  }
  CanonicalSolution sol;
  sol.which = which;
  sol.series_coefficients = std::move(c);
  sol.truncation_order = order;
  return sol;
}

cplx evaluate_series(const std::vector<cplx>& coefficients, cplx tau) {
  cplx sum = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) sum = sum * tau + *it;
  return sum;
}

SeedChoice choose_seed_radius(const Params& p, Canonical which, int order, double tol) {
  const auto low = canonical_series(p, which, order).series_coefficients;
  const auto high = canonical_series(p, which, order + 10).series_coefficients;
  SeedChoice best;
  best.agreement = std::numeric_limits<double>::infinity();
  for (double eps : {0.2, 0.15, 0.1, 0.07, 0.05, 0.03, 0.02, 0.01}) {
    double gap = 0.0;
    for (int k = 0; k < 16; ++k) {
      const cplx tau = std::polar(eps, kTwoPi * k / 16.0);
      gap = std::max(gap, std::abs(evaluate_series(low, tau) - evaluate_series(high, tau)));
    }
    if (gap < tol) return {eps, gap, true};
    if (gap < best.agreement) best = {eps, gap, false};
  }
  return best;
}

CanonicalSolution continue_canonical(const CanonicalSolution& sol, const Params& p,
                                     const IntegratorConfig& cfg,
                                     const ContinuationOptions& opts) {
  p.validate();
  cfg.validate();
  if (opts.rays < 1 || opts.rays % 2 == 0) {
    throw std::invalid_argument("continue_canonical: rays must be odd");
  }
  const Params q = sol.which == Canonical::kPsi1 ? p : mirrored(p);
  const SeedChoice seed = choose_seed_radius(p, sol.which, sol.truncation_order, opts.seed_tol);
  if (!seed.accepted) {
    throw CanonicalError(CanonicalErrorKind::kSeedInaccurate,
                         "continue_canonical: truncations disagree at every seed radius");
  }
  CanonicalSolution out = sol;
  out.seed_radius = seed.radius;
  out.seed_agreement = seed.agreement;

  const int m = opts.circle_samples;
  const double center = stable_angle(q);
  // Ray spacing: a whole number of circle samples, fan within +-60 degrees.
  const int half_fan = (opts.rays - 1) / 2;
  const int spacing = half_fan > 0 ? std::max(1, (m / 6) / half_fan) : 0;

  std::vector<ChartState> ray_ends(opts.rays);
  const long nrays = opts.rays;
#pragma omp parallel for schedule(static, 1)
  for (long j = 0; j < nrays; ++j) {
    const int offset = static_cast<int>(j) - half_fan;
    const double angle = center + kTwoPi * offset * spacing / m;
    const cplx start_tau = std::polar(seed.radius, angle);
    const ChartState start = ChartState::from({evaluate_series(sol.series_coefficients, start_tau), false});
    ray_ends[j] = riccati_segment(q, RayPath{angle, seed.radius, 1.0}, 0.0, 1.0, start, cfg,
                                  opts.chart_switch);
  }

  auto values = riccati_circle(q, ray_ends[half_fan].point(), center, m, cfg, opts.chart_switch);
  out.closure_error = chordal_distance(values.front(), values.back());
  out.ray_consistency = 0.0;
  for (int j = 0; j < opts.rays; ++j) {
    const int offset = j - half_fan;
    const int idx = ((offset * spacing) % m + m) % m;
    out.ray_consistency =
        std::max(out.ray_consistency, chordal_distance(ray_ends[j].point(), values[idx]));
  }
  values.pop_back();
  out.circle_angles.resize(m);
  for (int k = 0; k < m; ++k) out.circle_angles[k] = center + kTwoPi * k / m;
  if (sol.which == Canonical::kPsi2) {
    for (auto& v : values) v = v.reciprocal();
  }
  out.circle_values = std::move(values);
  return out;
}

namespace {

// Winding of z1 along the unit circle, z solving the linear system of q with
// z2 / z1 following psi_1 of q; seeded on the stable ray at radius eps.
double outer_winding(const Params& q, const std::vector<cplx>& coefficients, double eps,
                     const IntegratorConfig& cfg) {
  const double angle = stable_angle(q);
  auto linear = [&q](cplx tau, std::span<const cplx> z, std::span<cplx> dz) {
    const Mat2 c = linear_coefficient(q, tau);
    dz[0] = c(0, 0) * z[0] + c(0, 1) * z[1];
    dz[1] = c(1, 0) * z[0] + c(1, 1) * z[1];
  };
  const cplx seed_tau = std::polar(eps, angle);
  const std::vector<cplx> z0{cplx(1.0), evaluate_series(coefficients, seed_tau)};
  const auto ray = integrate_path(linear, RayPath{angle, eps, 1.0}, z0, cfg);

  const Path circle = CirclePath{1.0, angle, angle + kTwoPi};
  auto rhs = [&](double u, std::span<const double> y, std::span<double> dy) {
    const cplx tau = path_point(circle, u);
    const cplx vel = path_velocity(circle, u);
    linear(tau, as_complex(y), as_complex(dy));
    for (auto& d : as_complex(dy)) d *= vel;
  };
  double winding = 0.0;
  cplx previous = ray.state[0];
  bool resolved = true;
  auto observer = [&](double, std::span<const double> y) {
    const cplx z1{y[0], y[1]};
    const double step = std::arg(z1 / previous);
    if (std::abs(step) > kPi / 2.0) resolved = false;
    winding += step;
    previous = z1;
    return true;
  };
  integrate_dopri5(rhs, 0.0, 1.0, to_real(ray.state), cfg, observer);
  if (!resolved) return std::numeric_limits<double>::quiet_NaN();
  return winding / kTwoPi;
}

// Winding of z1 along |tau| = eps: (i nu / 2) * mean of psi_1 there.
double inner_winding(const Params& q, const std::vector<cplx>& coefficients, double eps) {
  constexpr int kNodes = 128;
  cplx mean = 0.0;
  for (int k = 0; k < kNodes; ++k) {
    mean += evaluate_series(coefficients, std::polar(eps, kTwoPi * k / kNodes));
  }
  mean /= static_cast<double>(kNodes);
  return (kI * q.nu / 2.0 * mean).real();
}

}  // namespace

PoleCount count_poles_unit_disk(const CanonicalSolution& sol, const Params& p,
                                const IntegratorConfig& cfg) {
  p.validate();
  if (sol.circle_values.empty() || !(sol.seed_radius > 0.0)) {
    throw std::invalid_argument("count_poles_unit_disk: solution has not been continued");
  }
  const Params q = sol.which == Canonical::kPsi1 ? p : mirrored(p);

  PoleCount out;
  cplx mean = 0.0;
  bool finite = true;
  for (const ProjPoint& v : sol.circle_values) {
    const ProjPoint chart = sol.which == Canonical::kPsi1 ? v : v.reciprocal();
    if (chart.infinite) finite = false;
    mean += chart.value;
  }
  mean /= static_cast<double>(sol.circle_values.size());
  out.quadrature_count =
      finite ? (kI * q.nu / 2.0 * mean).real() : std::numeric_limits<double>::quiet_NaN();

  double eps = sol.seed_radius;
  for (int attempt = 0; attempt < 3; ++attempt, eps *= 0.7) {
    const double raw = outer_winding(q, sol.series_coefficients, eps, cfg) -
                       inner_winding(q, sol.series_coefficients, eps);
    out.raw_winding = raw;
    out.contour_residual = std::abs(raw - std::round(raw));
    if (std::isfinite(raw) && out.contour_residual < 0.1) {
      out.count = static_cast<int>(std::lround(raw));
      return out;
    }
  }
  throw CanonicalError(CanonicalErrorKind::kWindingNotIntegral,
                       "count_poles_unit_disk: winding number is not close to an integer");
}

namespace {

BranchReport evaluate_branch(const Params& p, Canonical which, const IntegratorConfig& cfg,
                             const ContinuationOptions& opts, int order) {
  BranchReport br;
  try {
    auto sol = continue_canonical(canonical_series(p, which, order), p, cfg, opts);
    br.min_modulus = std::numeric_limits<double>::infinity();
    for (const ProjPoint& v : sol.circle_values) {
      br.min_modulus = std::min(br.min_modulus, v.modulus());
      br.max_modulus = std::max(br.max_modulus, v.modulus());
    }
    br.closure_error = sol.closure_error;
    br.count = count_poles_unit_disk(sol, p, cfg).count;
    br.evaluated = true;
    constexpr double kSlack = 1e-6;
    br.holds = br.count == 0 && (which == Canonical::kPsi1 ? br.max_modulus <= 1.0 + kSlack
                                                           : br.min_modulus >= 1.0 - kSlack);
  } catch (const std::exception& e) {
    br.error = e.what();
  }
  return br;
}

}  // namespace

ConditionStar condition_star(const Params& p, const IntegratorConfig& cfg,
                             const ContinuationOptions& opts, int order) {
  ConditionStar out;
  out.psi1 = evaluate_branch(p, Canonical::kPsi1, cfg, opts, order);
  out.psi2 = evaluate_branch(p, Canonical::kPsi2, cfg, opts, order);
  if (out.psi1.holds) {
    out.branch = 1;
  } else if (out.psi2.holds) {
    out.branch = 2;
  }
  out.holds = out.branch != 0;
  if (out.psi1.evaluated && out.psi1.max_modulus <= 1.0 + 1e-6) {
    out.rho_from_poles = p.a - 2.0 * out.psi1.count;
  } else if (out.psi2.evaluated && out.psi2.min_modulus >= 1.0 - 1e-6) {
    // Same formula for the mirrored equation, and rho(nu, -a, -s) = -rho(nu, a, s).
    out.rho_from_poles = p.a + 2.0 * out.psi2.count;
  }
  return out;
}

}  // namespace josephson
