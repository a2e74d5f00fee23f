#include "doctest.h"
#include "josephson/torus_flow.hpp"

#include <cmath>

using namespace josephson;

namespace {

// Independent oracle: classical RK4 with a fixed step.
double rk4_period_map(const Params& p, double x, int steps) {
  const double h = kTwoPi / steps;
  double t = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double k1 = torus_field(p, t, x);
    const double k2 = torus_field(p, t + h / 2, x + h / 2 * k1);
    const double k3 = torus_field(p, t + h / 2, x + h / 2 * k2);
    const double k4 = torus_field(p, t + h, x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  return x;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((Params{0.0, 1.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Params{1.0, NAN, 1.0}.validate()), std::invalid_argument);
  CHECK_NOTHROW((Params{-2.0, 1.0, 1.0}.validate()));
}

TEST_CASE("period map matches a fixed-step RK4 oracle") {
  const auto cfg = torus_integrator_config();
  for (const Params p : {Params{1.0, 0.3, 2.0}, Params{1.0, -2.2, 7.5}, Params{2.0, 1.0, 4.0}}) {
    for (double x : {0.0, 1.3, -2.0}) {
      CHECK(std::abs(period_map(p, x, cfg) - rk4_period_map(p, x, 20000)) < 1e-9);
    }
  }
}

TEST_CASE("variational derivative matches finite differences") {
  const Params p{1.0, 0.7, 3.0};
  const auto cfg = torus_integrator_config();
  const double x = 0.9, h = 1e-5;
  const PeriodValue v = period_map_with_derivative(p, x, cfg);
  const double fd = (period_map(p, x + h, cfg) - period_map(p, x - h, cfg)) / (2 * h);
  CHECK(v.derivative == doctest::Approx(fd).epsilon(1e-7));
  CHECK(v.value == doctest::Approx(period_map(p, x, cfg)).epsilon(1e-10));
}

TEST_CASE("fast autonomous drift against a million-step RK4 oracle") {
  const Params p{1.0, 5.0, 0.0};
  const auto cfg = torus_integrator_config();
  for (double x : {0.0, 2.0}) {
    CHECK(std::abs(period_map(p, x, cfg) - rk4_period_map(p, x, 1'000'000)) < 1e-9);
  }
  const RotationResult r = rotation_number(p, cfg);
  CHECK(std::abs(r.rho - std::sqrt(24.0)) < 1e-9);
}

TEST_CASE("equilibria of the autonomous equation are fixed") {
  const auto cfg = torus_integrator_config();
  CHECK(period_map({1.0, 0.0, 0.0}, 0.0, cfg) == 0.0);
  CHECK(std::abs(period_map({1.0, 0.0, 0.0}, kPi, cfg) - kPi) < 1e-12);
  const Params p{1.0, 0.5, 0.0};
  const double eq = -std::asin(0.5);  // sin x = -a
  CHECK(std::abs(period_map(p, eq, torus_integrator_config()) - eq) < 1e-10);
}

TEST_CASE("lift commutes with translation by 2 pi") {
  const LiftMap lift = LiftMap::sample({1.0, 0.4, 2.0}, 64, torus_integrator_config());
  for (double x : {0.1, 2.5, 5.9}) {
    CHECK(lift(x + kTwoPi) == doctest::Approx(lift(x) + kTwoPi).epsilon(1e-14));
    CHECK(lift(x - 2 * kTwoPi) == doctest::Approx(lift(x) - 2 * kTwoPi).epsilon(1e-14));
  }
}

TEST_CASE("interpolated lift is accurate between nodes") {
  const Params p{1.0, 1.7, 5.0};
  const auto cfg = torus_integrator_config();
  const LiftMap lift = LiftMap::sample(p, 256, cfg);
  for (double x : {0.0123, 1.111, 3.3, 6.0}) {
    CHECK(std::abs(lift(x) - period_map(p, x, cfg)) < 1e-7);
  }
  const LiftMap refined = lift.refined(cfg);
  CHECK(refined.size() == 512);
  const LiftMap direct = LiftMap::sample(p, 512, cfg);
  for (int k = 0; k < 512; ++k) CHECK(refined.values()[k] == direct.values()[k]);
}

TEST_CASE("rotation number of the autonomous equation") {
  const auto cfg = torus_integrator_config();
  for (double a : {1.5, 3.0, 5.0}) {
    const RotationResult r = rotation_number({1.0, a, 0.0}, cfg);
    CHECK(r.converged);
    CHECK(!r.locked_at);
    CHECK(r.rho == doctest::Approx(std::sqrt(a * a - 1.0)).epsilon(1e-9));
  }
  const RotationResult inside = rotation_number({1.0, 0.6, 0.0}, cfg);
  CHECK(inside.locked_at == 0L);
  CHECK(inside.rho == 0.0);
}

TEST_CASE("locking at a = 0 for nonzero s") {
  for (double s : {0.5, 2.5, 10.0}) {
    const RotationResult r = rotation_number({1.0, 0.0, s}, torus_integrator_config());
    CHECK(r.locked_at == 0L);
    CHECK(r.residual < 1e-9);
  }
}

TEST_CASE("lift-based rotation number agrees with a direct orbit average") {
  const Params p{1.0, 2.3, 8.0};
  const auto cfg = torus_integrator_config();
  const RotationResult r = rotation_number(p, cfg);
  REQUIRE(r.converged);
  CHECK(std::abs(r.rho - rotation_number_orbit(p, cfg, 4000)) < 1e-7);
  CHECK(std::abs(r.rho - rotation_number_orbit(p, cfg, 4000, 2.0)) < 1e-7);
}

TEST_CASE("rotation number does not depend on the base point") {
  const Params p{1.0, 2.3, 8.0};
  const auto cfg = torus_integrator_config();
  const RotationResult r = rotation_number(p, cfg);
  REQUIRE(r.converged);
  REQUIRE_FALSE(r.locked_at);
  const LiftMap lift = LiftMap::sample(p, r.samples, cfg);
  const double from_one = weighted_birkhoff_rotation(lift, 1.0, static_cast<int>(r.iterations));
  CHECK(std::abs(from_one - r.rho) <= 2.0 * r.residual + 1e-12);
}

TEST_CASE("rotation number symmetries") {
  const auto cfg = torus_integrator_config();
  const double base = rotation_number({1.0, 1.3, 4.4}, cfg).rho;
  CHECK(std::abs(rotation_number({1.0, 1.3, -4.4}, cfg).rho - base) < 1e-8);
  CHECK(std::abs(rotation_number({1.0, -1.3, 4.4}, cfg).rho + base) < 1e-8);
  CHECK(std::abs(rotation_number({-1.0, 1.3, 4.4}, cfg).rho - base) < 1e-8);
}

TEST_CASE("rotation number is nondecreasing in a and within |nu| of a") {
  const auto cfg = torus_integrator_config();
  double previous = -1e9;
  for (double a = -2.0; a <= 2.0; a += 0.25) {
    const double rho = rotation_number({0.8, a, 3.0}, cfg).rho;
    CHECK(rho >= previous - 1e-9);
    CHECK(rho >= a - 0.8 - 1e-9);
    CHECK(rho <= a + 0.8 + 1e-9);
    previous = rho;
  }
}

TEST_CASE("serial and parallel lift sampling agree bitwise") {
  const Params p{1.0, 0.9, 6.0};
  const auto cfg = torus_integrator_config();
  const LiftMap a = LiftMap::sample(p, 128, cfg, 0.0, Execution::kSerial);
  const LiftMap b = LiftMap::sample(p, 128, cfg, 0.0, Execution::kParallel);
  CHECK(a.values() == b.values());
  CHECK(a.slopes() == b.slopes());
}

TEST_CASE("identity test") {
  const IdentityTest t = is_identity_map({1.0, 0.0, 2.6781168019065467}, 1e-6, 32);
  CHECK(t.identity);
  CHECK(t.r == 0);
  CHECK_FALSE(is_identity_map({1.0, 0.0, 2.0}, 1e-6, 32).identity);
  CHECK_FALSE(is_identity_map({1.0, 0.0, 0.0}, 1e-6, 32).identity);
  CHECK_FALSE(is_identity_map({1.0, 0.5, 0.0}, 1e-6, 32).identity);
}
