#include "josephson/torus_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace josephson {

void Params::validate() const {
  if (!std::isfinite(nu) || !std::isfinite(a) || !std::isfinite(s)) {
    throw std::invalid_argument("Params: non-finite parameter");
  }
  if (nu == 0.0) throw std::invalid_argument("Params: nu must be nonzero");
}

IntegratorConfig torus_integrator_config() {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-11;
  cfg.abs_tol = 1e-12;
  cfg.initial_step = 0.05;
  return cfg;
}

double period_map(const Params& p, double x, const IntegratorConfig& cfg, double section) {
  auto rhs = [&p](double t, std::span<const double> y, std::span<double> dy) {
    dy[0] = torus_field(p, t, y[0]);
  };
  return integrate_dopri5(rhs, section, section + kTwoPi, std::vector<double>{x}, cfg)
      .state[0];
}

PeriodValue period_map_with_derivative(const Params& p, double x,
                                       const IntegratorConfig& cfg, double section) {
  auto rhs = [&p](double t, std::span<const double> y, std::span<double> dy) {
    dy[0] = torus_field(p, t, y[0]);
    dy[1] = p.nu * std::cos(y[0]) * y[1];
  };
  auto res = integrate_dopri5(rhs, section, section + kTwoPi,
                              std::vector<double>{x, 1.0}, cfg);
  return {res.state[0], res.state[1], res.error_estimate};
}

// ---------------------------------------------------------------------------
// LiftMap

namespace {

// Cubic coefficients of the Hermite piece on [0, 1] in the local variable u.
struct Cubic {
  double c0, c1, c2, c3;
  [[nodiscard]] double operator()(double u) const { return c0 + u * (c1 + u * (c2 + u * c3)); }
};

Cubic hermite_piece(double y0, double y1, double m0, double m1, double h) {
  return {y0, h * m0, 3.0 * (y1 - y0) - 2.0 * h * m0 - h * m1,
          2.0 * (y0 - y1) + h * m0 + h * m1};
}

void limit_slopes(const std::vector<double>& values, std::vector<double>& slopes,
                  double step) {
  const int n = static_cast<int>(values.size());
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const double y1 = values[j] + (j == 0 ? kTwoPi : 0.0);
    const double delta = (y1 - values[i]) / step;
    if (delta <= 0.0) continue;  // cannot happen for a flow map
    const double alpha = slopes[i] / delta;
    const double beta = slopes[j] / delta;
    const double norm = alpha * alpha + beta * beta;
    if (norm > 9.0) {
      const double tau = 3.0 / std::sqrt(norm);
      slopes[i] = tau * alpha * delta;
      slopes[j] = tau * beta * delta;
    }
  }
}

}  // namespace

LiftMap LiftMap::sample(const Params& p, int n_samples, const IntegratorConfig& cfg,
                        double section, Execution exec) {
  p.validate();
  cfg.validate();
  if (n_samples < 8) throw std::invalid_argument("LiftMap: need at least 8 samples");
  LiftMap m;
  m.params_ = p;
  m.section_ = section;
  m.step_ = kTwoPi / n_samples;
  m.nodes_.resize(n_samples);
  m.values_.resize(n_samples);
  m.raw_slopes_.resize(n_samples);
  m.errors_.resize(n_samples);

  auto fill = [&](int k) {
    const double x = k * m.step_;
    const PeriodValue v = period_map_with_derivative(p, x, cfg, section);
    m.nodes_[k] = x;
    m.values_[k] = v.value;
    m.raw_slopes_[k] = v.derivative;
    m.errors_[k] = v.error;
  };
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (int k = 0; k < n_samples; ++k) fill(k);
  } else {
    for (int k = 0; k < n_samples; ++k) fill(k);
  }
  m.finish();
  return m;
}

LiftMap LiftMap::refined(const IntegratorConfig& cfg, Execution exec) const {
  const int n = size();
  LiftMap m;
  m.params_ = params_;
  m.section_ = section_;
  m.step_ = kTwoPi / (2 * n);
  m.nodes_.resize(2 * n);
  m.values_.resize(2 * n);
  m.raw_slopes_.resize(2 * n);
  m.errors_.resize(2 * n);
  for (int k = 0; k < n; ++k) {
    m.nodes_[2 * k] = nodes_[k];
    m.values_[2 * k] = values_[k];
    m.raw_slopes_[2 * k] = raw_slopes_[k];
    m.errors_[2 * k] = errors_[k];
  }
  auto fill = [&](int k) {
    const int i = 2 * k + 1;
    const double x = i * m.step_;
    const PeriodValue v = period_map_with_derivative(params_, x, cfg, section_);
    m.nodes_[i] = x;
    m.values_[i] = v.value;
    m.raw_slopes_[i] = v.derivative;
    m.errors_[i] = v.error;
  };
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (int k = 0; k < n; ++k) fill(k);
  } else {
    for (int k = 0; k < n; ++k) fill(k);
  }
  m.finish();
  return m;
}

void LiftMap::finish() {
  integration_error_ = *std::max_element(errors_.begin(), errors_.end());
  slopes_ = raw_slopes_;
  limit_slopes(values_, slopes_, step_);
}

double LiftMap::operator()(double x) const {
  const double turns = std::floor(x / kTwoPi);
  const double xr = x - turns * kTwoPi;
  const int n = size();
  int i = static_cast<int>(xr / step_);
  i = std::clamp(i, 0, n - 1);
  const int j = (i + 1) % n;
  const double y1 = values_[j] + (j == 0 ? kTwoPi : 0.0);
  const double u = (xr - nodes_[i]) / step_;
  return hermite_piece(values_[i], y1, slopes_[i], slopes_[j], step_)(u) + turns * kTwoPi;
}

std::pair<double, double> LiftMap::deviation_range() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const int n = size();
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const double y1 = values_[j] + (j == 0 ? kTwoPi : 0.0);
    Cubic g = hermite_piece(values_[i], y1, slopes_[i], slopes_[j], step_);
    g.c0 -= nodes_[i];
    g.c1 -= step_;
    auto visit = [&](double u) {
      const double v = g(u);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    };
    visit(0.0);
    // g'(u) = c1 + 2 c2 u + 3 c3 u^2
    const double qa = 3.0 * g.c3, qb = 2.0 * g.c2, qc = g.c1;
    if (std::abs(qa) > 1e-300) {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (qb + std::copysign(sq, qb));
        for (double u : {q / qa, q != 0.0 ? qc / q : -1.0}) {
          if (u > 0.0 && u < 1.0) visit(u);
        }
      }
    } else if (std::abs(qb) > 1e-300) {
      const double u = -qc / qb;
      if (u > 0.0 && u < 1.0) visit(u);
    }
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Rotation number

namespace {

std::optional<long> locked_index(const LiftMap& lift) {
  const auto [lo, hi] = lift.deviation_range();
  const double r = std::ceil(lo / kTwoPi);
  if (kTwoPi * r <= hi) return static_cast<long>(r);
  return std::nullopt;
}

}  // namespace

namespace {

// Weighted average at the shortest length (from min_periods, doubling) that
// agrees with the half length; returns {estimate, disagreement, length}.
struct Averaged {
  double rho;
  double error;
  long periods;
};

Averaged converged_average(const LiftMap& lift, int min_periods, int max_periods, double tol) {
  int n = std::min(min_periods, max_periods);
  double coarse = weighted_birkhoff_rotation(lift, 0.0, std::max(1, n / 2));
  for (;;) {
    const double full = weighted_birkhoff_rotation(lift, 0.0, n);
    const double err = std::abs(full - coarse);
    if (err < tol || n >= max_periods) return {full, err, n};
    coarse = full;
    n = n > max_periods / 2 ? max_periods : 2 * n;
  }
}

}  // namespace

RotationResult rotation_number(const Params& p, const IntegratorConfig& cfg,
                               int max_periods, const RotationOptions& opts,
                               Execution exec) {
  p.validate();
  if (max_periods < 1) throw std::invalid_argument("rotation_number: max_periods < 1");
  if (opts.initial_samples < 8 || opts.max_samples < opts.initial_samples ||
      opts.min_periods < 1) {
    throw std::invalid_argument("rotation_number: bad sample counts");
  }

  RotationResult out;
  double previous = std::numeric_limits<double>::quiet_NaN();
  LiftMap lift = LiftMap::sample(p, opts.initial_samples, cfg, 0.0, exec);
  for (;;) {
    out.samples = lift.size();
    if (auto r = locked_index(lift)) {
      out.rho = static_cast<double>(*r);
      out.locked_at = r;
      out.iterations = 0;
      // Integrated node values on both sides of 2pi r (beyond their error)
      // prove a fixed point of H - 2pi r, hence rho = r exactly.
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (int k = 0; k < lift.size(); ++k) {
        const double d = lift.values()[k] - lift.nodes()[k] - kTwoPi * static_cast<double>(*r);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      const double err = lift.integration_error();
      out.residual = (lo < -err && hi > err) ? 0.0 : std::max(err / kTwoPi, 1e-15);
      out.converged = true;
      return out;
    }
    const Averaged avg = converged_average(lift, opts.min_periods, max_periods, opts.tol / 4);
    out.rho = avg.rho;
    out.iterations = avg.periods;
    if (std::isfinite(previous)) {
      out.residual = std::abs(avg.rho - previous) + avg.error;
      if (out.residual < opts.tol) {
        out.converged = true;
        return out;
      }
    } else {
      out.residual = std::numeric_limits<double>::infinity();
    }
    previous = avg.rho;
    if (2 * lift.size() > opts.max_samples) break;
    lift = lift.refined(cfg, exec);
  }
  out.converged = false;
  return out;
}

double rotation_number_orbit(const Params& p, const IntegratorConfig& cfg, int periods,
                             double x0) {
  p.validate();
  return weighted_birkhoff_rotation(
      [&](double x) { return period_map(p, x, cfg); }, x0, periods);
}

IdentityTest is_identity_map(const Params& p, double tol, int n_samples,
                             const IntegratorConfig& cfg) {
  p.validate();
  if (n_samples < 8) throw std::invalid_argument("is_identity_map: n_samples < 8");
  std::vector<double> disp(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    const double x = kTwoPi * k / n_samples;
    disp[k] = period_map(p, x, cfg) - x;
  }
  double mean = 0.0;
  for (double d : disp) mean += d;
  mean /= n_samples;
  IdentityTest out;
  out.r = std::lround(mean / kTwoPi);
  for (double d : disp) {
    out.max_deviation = std::max(out.max_deviation, std::abs(d - kTwoPi * out.r));
  }
  out.identity = out.max_deviation < tol;
  return out;
}

}  // namespace josephson
