#include "josephson/ode.hpp"

namespace josephson {

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("IntegratorConfig: tolerances must be positive");
  }
  if (max_steps <= 0) throw std::invalid_argument("IntegratorConfig: max_steps must be positive");
  if (!(min_step > 0.0) || !(min_step <= initial_step)) {
    throw std::invalid_argument("IntegratorConfig: need 0 < min_step <= initial_step");
  }
}

IntegrationResult integrate(const OdeProblem& problem, const IntegratorConfig& cfg) {
  cfg.validate();
  if (!problem.right_hand_side) throw std::invalid_argument("integrate: missing right-hand side");
  return integrate_dopri5(problem.right_hand_side, problem.t0, problem.t1, problem.y0, cfg);
}

std::vector<double> to_real(std::span<const cplx> z) {
  std::vector<double> v(2 * z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    v[2 * i] = z[i].real();
    v[2 * i + 1] = z[i].imag();
  }
  return v;
}

std::vector<cplx> to_complex(std::span<const double> v) {
  std::vector<cplx> z(v.size() / 2);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = {v[2 * i], v[2 * i + 1]};
  return z;
}

cplx path_point(const Path& path, double u) {
  if (const auto* c = std::get_if<CirclePath>(&path)) {
    return std::polar(c->radius, c->theta0 + u * (c->theta1 - c->theta0));
  }
  const auto& r = std::get<RayPath>(path);
  return std::polar(r.r0 + u * (r.r1 - r.r0), r.angle);
}

cplx path_velocity(const Path& path, double u) {
  if (const auto* c = std::get_if<CirclePath>(&path)) {
    return cplx(0.0, c->theta1 - c->theta0) * path_point(path, u);
  }
  const auto& r = std::get<RayPath>(path);
  return std::polar(r.r1 - r.r0, r.angle);
}

namespace {

PathResult integrate_segment(const ComplexRhs& rhs, const Path& path,
                             std::vector<double> y0, double u0, double u1,
                             const IntegratorConfig& cfg) {
  auto pulled_back = [&](double u, std::span<const double> y, std::span<double> dy) {
    const cplx tau = path_point(path, u);
    const cplx vel = path_velocity(path, u);
    auto dz = as_complex(dy);
    rhs(tau, as_complex(y), dz);
    for (auto& d : dz) d *= vel;
  };
  auto res = integrate_dopri5(pulled_back, u0, u1, std::move(y0), cfg);
  return {to_complex(res.state), res.error_estimate, res.steps};
}

}  // namespace

PathResult integrate_path(const ComplexRhs& rhs, const Path& path,
                          std::span<const cplx> z0, const IntegratorConfig& cfg) {
  cfg.validate();
  return integrate_segment(rhs, path, to_real(z0), 0.0, 1.0, cfg);
}

std::vector<std::vector<cplx>> integrate_path_sampled(
    const ComplexRhs& rhs, const Path& path, std::span<const cplx> z0,
    int segments, const IntegratorConfig& cfg, double* error_estimate) {
  cfg.validate();
  if (segments < 1) throw std::invalid_argument("integrate_path_sampled: segments < 1");
  std::vector<std::vector<cplx>> out;
  out.reserve(static_cast<std::size_t>(segments) + 1);
  out.emplace_back(z0.begin(), z0.end());
  double err = 0.0;
  for (int k = 0; k < segments; ++k) {
    const double u0 = static_cast<double>(k) / segments;
    const double u1 = static_cast<double>(k + 1) / segments;
    auto seg = integrate_segment(rhs, path, to_real(out.back()), u0, u1, cfg);
    err += seg.error_estimate;
    out.push_back(std::move(seg.state));
  }
  if (error_estimate) *error_estimate = err;
  return out;
}

}  // namespace josephson
