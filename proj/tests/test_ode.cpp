#include "doctest.h"
#include "josephson/ode.hpp"

#include <cmath>
#include <numbers>

using namespace josephson;

namespace {

IntegratorConfig tight() {
  IntegratorConfig c;
  c.rel_tol = 1e-12;
  c.abs_tol = 1e-14;
  return c;
}

auto exp_rhs = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0]; };

}  // namespace

TEST_CASE("constant solution stays put") {
  auto rhs = [](double, std::span<const double>, std::span<double> dy) { dy[0] = 0.0; };
  const auto res = integrate_dopri5(rhs, 0.0, 10.0, {3.5}, tight());
  CHECK(res.state[0] == 3.5);
  CHECK(res.t_end == 10.0);
}

TEST_CASE("exponential growth reaches e") {
  const auto res = integrate_dopri5(exp_rhs, 0.0, 1.0, {1.0}, tight());
  CHECK(res.state[0] == doctest::Approx(std::numbers::e).epsilon(1e-11));
}

TEST_CASE("backward integration inverts forward integration") {
  auto pend = [](double t, std::span<const double> y, std::span<double> dy) {
    dy[0] = std::sin(y[0]) + 0.3 + 2.0 * std::sin(t);
  };
  const auto fwd = integrate_dopri5(pend, 0.0, 7.0, {0.4}, tight());
  const auto back = integrate_dopri5(pend, 7.0, 0.0, fwd.state, tight());
  CHECK(back.state[0] == doctest::Approx(0.4).epsilon(1e-10));
}

TEST_CASE("linear system solutions superpose") {
  auto lin = [](double t, std::span<const double> y, std::span<double> dy) {
    dy[0] = std::cos(t) * y[1];
    dy[1] = -y[0] + 0.2 * y[1];
  };
  const auto u = integrate_dopri5(lin, 0.0, 3.0, {1.0, 0.0}, tight()).state;
  const auto v = integrate_dopri5(lin, 0.0, 3.0, {0.0, 1.0}, tight()).state;
  const auto w = integrate_dopri5(lin, 0.0, 3.0, {2.0, -3.0}, tight()).state;
  CHECK(w[0] == doctest::Approx(2.0 * u[0] - 3.0 * v[0]).epsilon(1e-10));
  CHECK(w[1] == doctest::Approx(2.0 * u[1] - 3.0 * v[1]).epsilon(1e-10));
}

TEST_CASE("tighter tolerance gives smaller global error") {
  double previous = 1.0;
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    IntegratorConfig c;
    c.rel_tol = tol;
    c.abs_tol = tol;
    const double err =
        std::abs(integrate_dopri5(exp_rhs, 0.0, 2.0, {1.0}, c).state[0] - std::exp(2.0));
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("finite-time blow-up is reported") {
  auto blow = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0] * y[0]; };
  IntegratorConfig c;
  c.max_steps = 20000;
  CHECK_THROWS_AS(integrate_dopri5(blow, 0.0, 2.0, {1.0}, c), OdeError);
}

TEST_CASE("observer can stop the integration") {
  const auto res = integrate_dopri5(exp_rhs, 0.0, 5.0, {1.0}, tight(),
                                    [](double, std::span<const double> y) { return y[0] < 10.0; });
  CHECK(res.stopped);
  CHECK(res.t_end < 5.0);
  CHECK(res.state[0] >= 10.0);
}

TEST_CASE("invalid configurations are rejected") {
  IntegratorConfig c;
  c.rel_tol = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("OdeProblem entry point") {
  OdeProblem prob{exp_rhs, 0.0, 1.0, {2.0}};
  CHECK(prob.dimension() == 1);
  CHECK(integrate(prob, tight()).state[0] == doctest::Approx(2.0 * std::numbers::e));
}

TEST_CASE("complex rotation closes after 2 pi") {
  auto rot = [](double, std::span<const double> y, std::span<double> dy) {
    auto z = as_complex(y);
    auto dz = as_complex(dy);
    dz[0] = cplx(0, 1) * z[0];
  };
  const std::vector<cplx> z0{cplx(1.0, 0.0)};
  const auto res = integrate_dopri5(rot, 0.0, 2.0 * std::numbers::pi, to_real(z0), tight());
  const cplx z = to_complex(res.state)[0];
  CHECK(std::abs(z - cplx(1.0)) < 1e-10);
}

TEST_CASE("zero field along the unit circle") {
  ComplexRhs rhs = [](cplx, std::span<const cplx>, std::span<cplx> dz) { dz[0] = 0.0; };
  const std::vector<cplx> z0{cplx(0.3, -2.0)};
  CHECK(integrate_path(rhs, CirclePath{}, z0, tight()).state[0] == z0[0]);
}

TEST_CASE("Euler equation around the unit circle multiplies by exp(2 pi i c)") {
  for (double c : {1.0, 0.5, 0.25}) {
    ComplexRhs rhs = [c](cplx tau, std::span<const cplx> z, std::span<cplx> dz) {
      dz[0] = c * z[0] / tau;
    };
    const std::vector<cplx> z0{cplx(1.0)};
    const auto res = integrate_path(rhs, CirclePath{}, z0, tight());
    const cplx expected = std::exp(cplx(0, 2.0 * std::numbers::pi * c));
    CHECK(std::abs(res.state[0] - expected) < 1e-10);
  }
}

TEST_CASE("ray path integrates in the complex direction") {
  ComplexRhs rhs = [](cplx, std::span<const cplx> z, std::span<cplx> dz) { dz[0] = z[0]; };
  const double angle = 0.7;
  const std::vector<cplx> z0{cplx(1.0)};
  const auto res = integrate_path(rhs, RayPath{angle, 0.0, 1.5}, z0, tight());
  CHECK(std::abs(res.state[0] - std::exp(std::polar(1.5, angle))) < 1e-10);
}

TEST_CASE("sampled path returns segments + 1 states matching single runs") {
  ComplexRhs rhs = [](cplx tau, std::span<const cplx> z, std::span<cplx> dz) {
    dz[0] = z[0] / tau;
  };
  const std::vector<cplx> z0{cplx(1.0)};
  const auto samples = integrate_path_sampled(rhs, CirclePath{}, z0, 8, tight());
  REQUIRE(samples.size() == 9);
  for (int k = 0; k <= 8; ++k) {
    const cplx expected = std::polar(1.0, 2.0 * std::numbers::pi * k / 8);
    CHECK(std::abs(samples[k][0] - expected) < 1e-10);
  }
}

TEST_CASE("path geometry") {
  const Path circle = CirclePath{2.0, 0.0, std::numbers::pi};
  CHECK(std::abs(path_point(circle, 0.5) - cplx(0, 2)) < 1e-15);
  CHECK(std::abs(path_velocity(circle, 0.0) - cplx(0, 2.0 * std::numbers::pi)) < 1e-14);
  const Path ray = RayPath{std::numbers::pi / 2, 1.0, 3.0};
  CHECK(std::abs(path_point(ray, 0.5) - cplx(0, 2)) < 1e-15);
}
