#include "josephson/tongue.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

#include "josephson/special_functions.hpp"

namespace josephson {

namespace {

constexpr double kGolden = 0.6180339887498949;

// Extremum of f on [lo, hi] by golden-section search; sign = +1 for max.
double golden_extremum(const auto& f, double lo, double hi, double sign, int iterations) {
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = sign * f(x1);
  double f2 = sign * f(x2);
  for (int i = 0; i < iterations; ++i) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = sign * f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = sign * f(x2);
    }
  }
  return sign * std::max(f1, f2);
}

// Root of an increasing function on [lo, hi]; nullopt when not bracketed.
std::optional<double> increasing_root(const auto& f, double lo, double hi, double tol) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo < 0.0 && fhi > 0.0)) return std::nullopt;
  std::uintmax_t max_iter = 200;
  auto stop = [tol](double x, double y) { return std::abs(y - x) <= tol; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, max_iter);
  return 0.5 * (a + b);
}

}  // namespace

std::pair<double, double> symmetric_deviations(const Params& p, long r,
                                               const IntegratorConfig& cfg) {
  const double shift = kTwoPi * static_cast<double>(r);
  const double half = kPi / 2.0;
  const double d_plus = period_map(p, half, cfg, kSymmetricSection) - half - shift;
  const double d_minus = period_map(p, -half, cfg, kSymmetricSection) + half - shift;
  return {d_plus, d_minus};
}

LockingWitness locking_witness(const Params& p, long r, int n_samples,
                               const IntegratorConfig& cfg) {
  p.validate();
  if (n_samples < 16) throw std::invalid_argument("locking_witness: n_samples < 16");
  const int n = (n_samples + 3) / 4 * 4;
  const double h = kTwoPi / n;
  const double shift = kTwoPi * static_cast<double>(r);
  auto dev = [&](double x) { return period_map(p, x, cfg, kSymmetricSection) - x - shift; };

  std::vector<double> d(n);
  for (int k = 0; k < n; ++k) d[k] = dev(k * h);
  const int kmin = static_cast<int>(std::min_element(d.begin(), d.end()) - d.begin());
  const int kmax = static_cast<int>(std::max_element(d.begin(), d.end()) - d.begin());

  LockingWitness w;
  w.r = r;
  constexpr int kPolish = 24;
  w.min_dev = std::min(d[kmin], golden_extremum(dev, (kmin - 1) * h, (kmin + 1) * h, -1.0, kPolish));
  w.max_dev = std::max(d[kmax], golden_extremum(dev, (kmax - 1) * h, (kmax + 1) * h, 1.0, kPolish));
  return w;
}

std::pair<double, double> default_bracket(long r, double s, double nu) {
  const double rr = static_cast<double>(r);
  const double anu = std::abs(nu);
  if (std::abs(s) > 5.0) {
    const double half_width = std::abs(nu * bessel_j(static_cast<int>(r), -s / nu));
    const double margin = 0.3 * anu;
    return {std::max(rr - anu - 0.05, rr - half_width - margin),
            std::min(rr + anu + 0.05, rr + half_width + margin)};
  }
  return {rr - anu - 0.05, rr + anu + 0.05};
}

TongueSlice boundary_at(long r, double s, double nu, std::pair<double, double> bracket,
                        double tol_a, const IntegratorConfig& cfg, bool verify) {
  Params base{nu, 0.0, s};
  base.validate();
  if (!(bracket.first < bracket.second)) throw std::invalid_argument("boundary_at: empty bracket");

  auto d_plus = [&](double a) {
    Params p = base;
    p.a = a;
    return period_map(p, kPi / 2.0, cfg, kSymmetricSection) - kPi / 2.0 - kTwoPi * r;
  };
  auto d_minus = [&](double a) {
    Params p = base;
    p.a = a;
    return period_map(p, -kPi / 2.0, cfg, kSymmetricSection) + kPi / 2.0 - kTwoPi * r;
  };

  TongueSlice slice;
  slice.r = r;
  slice.s = s;
  const auto root_plus = increasing_root(d_plus, bracket.first, bracket.second, tol_a);
  const auto root_minus = increasing_root(d_minus, bracket.first, bracket.second, tol_a);
  if (!root_plus || !root_minus) {
    slice.empty = true;
    slice.g_minus = slice.g_plus = slice.signed_gap = std::numeric_limits<double>::quiet_NaN();
    slice.width = std::numeric_limits<double>::quiet_NaN();
    return slice;
  }
  slice.signed_gap = *root_plus - *root_minus;
  slice.g_minus = std::min(*root_plus, *root_minus);
  slice.g_plus = std::max(*root_plus, *root_minus);
  slice.width = slice.g_plus - slice.g_minus;

  if (verify) {
    const double margin = std::max(100.0 * tol_a, 1e-6);
    Params below = base, above = base, mid = base;
    below.a = slice.g_minus - margin;
    above.a = slice.g_plus + margin;
    mid.a = 0.5 * (slice.g_minus + slice.g_plus);
    bool ok = !locking_witness(below, r).locked() && !locking_witness(above, r).locked();
    // A tongue narrower than the margin cannot be probed inside.
    if (slice.width > 2.0 * margin) ok = ok && locking_witness(mid, r).locked();
    slice.verified = ok;
  }
  return slice;
}

TongueSlice boundary_at(long r, double s, double nu, double tol_a,
                        const IntegratorConfig& cfg, bool verify) {
  const auto bracket = default_bracket(r, s, nu);
  TongueSlice slice = boundary_at(r, s, nu, bracket, tol_a, cfg, verify);
  if (slice.empty && std::abs(s) > 5.0) {
    // Bessel seed too tight; fall back to the a-priori bracket.
    const double anu = std::abs(nu);
    slice = boundary_at(r, s, nu, {r - anu - 0.05, r + anu + 0.05}, tol_a, cfg, verify);
  }
  return slice;
}

namespace {

std::vector<TongueSlice> slices_at(long r, double nu, const std::vector<double>& s_values,
                                   double tol_a, Execution exec, bool verify) {
  std::vector<TongueSlice> out(s_values.size());
  const auto cfg = torus_integrator_config();
  const long n = static_cast<long>(s_values.size());
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long k = 0; k < n; ++k) out[k] = boundary_at(r, s_values[k], nu, tol_a, cfg, verify);
  } else {
    for (long k = 0; k < n; ++k) out[k] = boundary_at(r, s_values[k], nu, tol_a, cfg, verify);
  }
  return out;
}

std::vector<std::size_t> interior_minima(const std::vector<TongueSlice>& slices) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 1; k + 1 < slices.size(); ++k) {
    const double w = slices[k].width;
    if (std::isnan(w)) continue;
    const double wl = slices[k - 1].width, wr = slices[k + 1].width;
    if ((std::isnan(wl) || w <= wl) && (std::isnan(wr) || w <= wr)) idx.push_back(k);
  }
  return idx;
}

}  // namespace

std::vector<TongueSlice> width_function(long r, double nu, const std::vector<double>& s_grid,
                                        int refine_levels, double tol_a, Execution exec,
                                        bool verify) {
  if (!std::is_sorted(s_grid.begin(), s_grid.end())) {
    throw std::invalid_argument("width_function: s_grid must be sorted");
  }
  std::vector<TongueSlice> slices = slices_at(r, nu, s_grid, tol_a, exec, verify);
  for (int level = 0; level < refine_levels; ++level) {
    std::vector<double> extra;
    for (std::size_t k : interior_minima(slices)) {
      extra.push_back(0.5 * (slices[k - 1].s + slices[k].s));
      extra.push_back(0.5 * (slices[k].s + slices[k + 1].s));
    }
    if (extra.empty()) break;
    auto more = slices_at(r, nu, extra, tol_a, exec, verify);
    slices.insert(slices.end(), more.begin(), more.end());
    std::sort(slices.begin(), slices.end(),
              [](const TongueSlice& x, const TongueSlice& y) { return x.s < y.s; });
  }
  return slices;
}

std::optional<Adjacency> refine_adjacency(long r, double nu, double a_guess, double s_guess,
                                          const AdjacencyOptions& opts, std::string* reason) {
  const auto cfg = torus_integrator_config();
  auto residual = [&](double a, double s) {
    const auto [dp, dm] = symmetric_deviations(Params{nu, a, s}, r, cfg);
    return std::array<double, 2>{dp, dm};
  };
  auto norm = [](const std::array<double, 2>& f) { return std::max(std::abs(f[0]), std::abs(f[1])); };

  double a = a_guess, s = s_guess;
  auto f = residual(a, s);
  int it = 0;
  for (; it < opts.max_newton && norm(f) > 1e-12; ++it) {
    const double ha = 1e-6, hs = 1e-6;
    const auto fa_p = residual(a + ha, s), fa_m = residual(a - ha, s);
    const auto fs_p = residual(a, s + hs), fs_m = residual(a, s - hs);
    const double j11 = (fa_p[0] - fa_m[0]) / (2 * ha), j12 = (fs_p[0] - fs_m[0]) / (2 * hs);
    const double j21 = (fa_p[1] - fa_m[1]) / (2 * ha), j22 = (fs_p[1] - fs_m[1]) / (2 * hs);
    const double det = j11 * j22 - j12 * j21;
    if (!std::isfinite(det) || std::abs(det) < 1e-14) {
      if (reason) *reason = "singular Jacobian";
      return std::nullopt;
    }
    double da = -(j22 * f[0] - j12 * f[1]) / det;
    double ds = -(-j21 * f[0] + j11 * f[1]) / det;
    const double cap = std::max(std::abs(da), std::abs(ds)) / 0.1;
    if (cap > 1.0) {
      da /= cap;
      ds /= cap;
    }
    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 20; ++k, lambda *= 0.5) {
      const auto trial = residual(a + lambda * da, s + lambda * ds);
      if (norm(trial) < norm(f)) {
        a += lambda * da;
        s += lambda * ds;
        f = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (norm(f) < 1e-9) break;  // already at the noise floor
      if (reason) *reason = "line search failed";
      return std::nullopt;
    }
    if (std::max(std::abs(lambda * da), std::abs(lambda * ds)) < 1e-14) break;
  }
  if (norm(f) > 1e-9) {
    if (reason) *reason = "did not converge";
    return std::nullopt;
  }

  const auto id = is_identity_map(Params{nu, a, s}, opts.identity_tol, opts.identity_samples, cfg);
  if (!id.identity || id.r != r) {
    if (reason) *reason = "period map is not the identity";
    return std::nullopt;
  }
  Adjacency adj;
  adj.r = r;
  adj.a = a;
  adj.s = s;
  adj.identity_residual = id.max_deviation;
  adj.abscissa_residual = std::abs(a - std::round(a));
  adj.newton_iterations = it;
  return adj;
}

AdjacencySearch find_adjacencies(long r, double nu, std::pair<double, double> s_range,
                                 double tol, const AdjacencyOptions& opts, Execution exec) {
  const auto [s_lo, s_hi] = s_range;
  if (!(s_lo < s_hi) || !(opts.scan_step > 0.0)) {
    throw std::invalid_argument("find_adjacencies: bad s range");
  }
  Params{nu, 0.0, 0.0}.validate();

  std::vector<double> grid;
  const int n = std::max(2, static_cast<int>(std::ceil((s_hi - s_lo) / opts.scan_step)));
  const double step = (s_hi - s_lo) / n;
  for (int k = 0; k < n; ++k) {
    const double s = s_lo + (k + 0.5) * step;
    if (std::abs(s) > 1e-6) grid.push_back(s);
  }
  const auto slices = slices_at(r, nu, grid, 1e-10, exec, false);

  struct Guess {
    double a, s;
  };
  std::vector<Guess> guesses;
  for (std::size_t k = 0; k + 1 < slices.size(); ++k) {
    const auto& x = slices[k];
    const auto& y = slices[k + 1];
    if (x.empty || y.empty) continue;
    if ((x.signed_gap < 0.0) != (y.signed_gap < 0.0)) {
      const double t = x.signed_gap / (x.signed_gap - y.signed_gap);
      const double mid_x = 0.5 * (x.g_minus + x.g_plus), mid_y = 0.5 * (y.g_minus + y.g_plus);
      guesses.push_back({mid_x + t * (mid_y - mid_x), x.s + t * (y.s - x.s)});
    }
  }
  for (std::size_t k : interior_minima(slices)) {
    if (slices[k].width < opts.width_threshold) {
      guesses.push_back({0.5 * (slices[k].g_minus + slices[k].g_plus), slices[k].s});
    }
  }

  std::vector<std::optional<Adjacency>> refined(guesses.size());
  std::vector<std::string> reasons(guesses.size());
  const long ng = static_cast<long>(guesses.size());
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long k = 0; k < ng; ++k)
      refined[k] = refine_adjacency(r, nu, guesses[k].a, guesses[k].s, opts, &reasons[k]);
  } else {
    for (long k = 0; k < ng; ++k)
      refined[k] = refine_adjacency(r, nu, guesses[k].a, guesses[k].s, opts, &reasons[k]);
  }

  AdjacencySearch out;
  for (std::size_t k = 0; k < guesses.size(); ++k) {
    if (!refined[k]) {
      out.failures.push_back({r, guesses[k].a, guesses[k].s, reasons[k]});
      continue;
    }
    const Adjacency& adj = *refined[k];
    if (adj.s <= s_lo || adj.s >= s_hi || std::abs(adj.s) < 1e-6) continue;
    if (adj.identity_residual >= tol) {
      out.failures.push_back({r, guesses[k].a, guesses[k].s, "identity residual above tolerance"});
      continue;
    }
    const bool duplicate = std::any_of(out.found.begin(), out.found.end(), [&](const Adjacency& o) {
      return std::abs(o.a - adj.a) < 1e-6 && std::abs(o.s - adj.s) < 1e-6;
    });
    if (!duplicate) out.found.push_back(adj);
  }
  std::sort(out.found.begin(), out.found.end(),
            [](const Adjacency& x, const Adjacency& y) { return x.s < y.s; });
  return out;
}

}  // namespace josephson
