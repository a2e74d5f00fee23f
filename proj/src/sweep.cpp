#include "josephson/sweep.hpp"

#include <cmath>
#include <stdexcept>

namespace josephson {

Range Range::parse(const std::string& text) {
  Range r;
  const auto first = text.find(':');
  try {
    if (first == std::string::npos) {
      r.lo = r.hi = std::stod(text);
      r.step = 1.0;
    } else {
      const auto second = text.find(':', first + 1);
      if (second == std::string::npos) throw std::invalid_argument("missing step");
      r.lo = std::stod(text.substr(0, first));
      r.hi = std::stod(text.substr(first + 1, second - first - 1));
      r.step = std::stod(text.substr(second + 1));
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("range '" + text + "' is not of the form lo:hi:step");
  }
  r.validate();
  return r;
}

void Range::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step)) {
    throw std::invalid_argument("range: non-finite value");
  }
  if (hi < lo) throw std::invalid_argument("range: hi < lo");
  if (!(step > 0.0)) throw std::invalid_argument("range: step must be positive");
}

std::vector<double> Range::values() const {
  validate();
  const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> v(n);
  for (long k = 0; k < n; ++k) v[k] = lo + static_cast<double>(k) * step;
  return v;
}

namespace {

GridPoint evaluate(double nu, double a, double s, const SweepOptions& opts) {
  return {a, s,
          rotation_number(Params{nu, a, s}, opts.integrator, opts.max_periods, opts.rotation,
                          Execution::kSerial)};
}

}  // namespace

std::vector<GridPoint> rotation_grid(double nu, const Range& a_range, const Range& s_range,
                                     const SweepOptions& opts, Execution exec) {
  if (exec == Execution::kSerial) return rotation_grid_serial(nu, a_range, s_range, opts);
  Params{nu, 0.0, 0.0}.validate();
  const auto as = a_range.values();
  const auto ss = s_range.values();
  const long na = static_cast<long>(as.size());
  const long total = na * static_cast<long>(ss.size());
  std::vector<GridPoint> out(total);
#pragma omp parallel for schedule(dynamic, 1)
  for (long idx = 0; idx < total; ++idx) {
    out[idx] = evaluate(nu, as[idx % na], ss[idx / na], opts);
  }
  return out;
}

std::vector<GridPoint> rotation_grid_serial(double nu, const Range& a_range,
                                            const Range& s_range, const SweepOptions& opts) {
  Params{nu, 0.0, 0.0}.validate();
  const auto as = a_range.values();
  const auto ss = s_range.values();
  std::vector<GridPoint> out;
  out.reserve(as.size() * ss.size());
  for (double s : ss) {
    for (double a : as) out.push_back(evaluate(nu, a, s, opts));
  }
  return out;
}

}  // namespace josephson
