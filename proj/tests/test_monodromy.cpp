#include "doctest.h"
#include "josephson/monodromy.hpp"

#include <cmath>

using namespace josephson;

namespace {
const cplx kImag(0.0, 1.0);
}

TEST_CASE("Riccati field is the projectivization of the linear system") {
  const Params p{1.3, 0.4, -2.0};
  for (cplx tau : {cplx(0.5, 0.5), cplx(-1.0, 0.2), cplx(0.0, 2.0)}) {
    const cplx z1(0.7, -0.3), z2(-1.1, 0.4);
    const Mat2 a = linear_coefficient(p, tau);
    const cplx dz1 = a(0, 0) * z1 + a(0, 1) * z2;
    const cplx dz2 = a(1, 0) * z1 + a(1, 1) * z2;
    const cplx quotient_rule = (dz2 * z1 - z2 * dz1) / (z1 * z1);
    CHECK(std::abs(riccati_rhs(p, tau, z2 / z1) - quotient_rule) < 1e-13);
    const cplx q = z1 / z2;
    const cplx recip = (dz1 * z2 - z1 * dz2) / (z2 * z2);
    CHECK(std::abs(riccati_rhs_reciprocal(p, tau, q) - recip) < 1e-13);
  }
}

TEST_CASE("Moebius action and the Riemann sphere") {
  const Mat2 m{{cplx(2.0), cplx(1.0), cplx(0.0, 1.0), cplx(3.0)}};
  const ProjPoint x{cplx(0.5, 0.5), false};
  const ProjPoint y = mobius_apply(m, x);
  CHECK(std::abs(y.value - (m(1, 0) + m(1, 1) * x.value) / (m(0, 0) + m(0, 1) * x.value)) < 1e-15);
  // M11 + M12 p = 0 sends p to infinity.
  CHECK(mobius_apply(m, {cplx(-2.0), false}).infinite);
  CHECK(mobius_apply(m, ProjPoint::infinity()).value == m(1, 1) / m(0, 1));
  CHECK(ProjPoint{cplx(0.0), false}.reciprocal().infinite);
  CHECK(chordal_distance(ProjPoint::infinity(), {cplx(1e12), false}) < 1e-11);
  CHECK(chordal_distance({cplx(0.0), false}, ProjPoint::infinity()) == doctest::Approx(1.0));
}

TEST_CASE("closed-form monodromy at a = s = 0") {
  const Monodromy m = monodromy({1.0, 0.0, 0.0});
  const double ch = std::cosh(kPi), sh = std::sinh(kPi);
  CHECK(std::abs(m.matrix(0, 0) - ch) < 1e-8);
  CHECK(std::abs(m.matrix(0, 1) + sh) < 1e-8);
  CHECK(std::abs(m.matrix(1, 0) + sh) < 1e-8);
  CHECK(std::abs(m.matrix(1, 1) - ch) < 1e-8);
}

TEST_CASE("determinant and unit-circle invariance") {
  for (const Params p : {Params{1.0, 0.37, 2.0}, Params{1.0, -2.1, 6.5}, Params{2.0, 1.4, 3.3}}) {
    const Monodromy m = monodromy(p);
    CHECK(std::abs(m.matrix.det() - std::exp(kImag * kTwoPi * p.a)) < 1e-8);
    CHECK(m.det_deviation < 1e-8);
    // Real equation: |p| = 1 is invariant, so the image of e^{ix} stays on it.
    for (double x : {0.0, 1.0, 4.0}) {
      const ProjPoint img = mobius_apply(m.matrix, {std::polar(1.0, x), false});
      CHECK(std::abs(img.modulus() - 1.0) < 1e-8);
      CHECK(std::abs(std::remainder(std::arg(img.value) -
                                        period_map(p, x, torus_integrator_config()),
                                    kTwoPi)) < 1e-7);
    }
  }
}

TEST_CASE("monodromy is the identity at an adjacency") {
  const Monodromy m = monodromy({1.0, 0.0, 2.6781168019065467});
  CHECK(max_abs_diff(m.matrix, Mat2::identity()) < 1e-6);
  CHECK(m.projective_deviation < 1e-6);
  CHECK(projective_deviation(Mat2{{cplx(2.0), cplx(0.0), cplx(0.0), cplx(2.0)}}) == 0.0);
}

TEST_CASE("canonical series: leading coefficients") {
  const Params p{1.0, 0.3, 2.0};
  const auto c = canonical_series(p, Canonical::kPsi1, 10).series_coefficients;
  REQUIRE(c.size() == 11);
  CHECK(c[0] == cplx(0.0));
  CHECK(c[1] == cplx(-p.nu / p.s));
  const auto d = canonical_series(p, Canonical::kPsi2, 10).series_coefficients;
  CHECK(d[1] == cplx(p.nu / p.s));
  CHECK_THROWS_AS(canonical_series({1.0, 0.0, 0.0}, Canonical::kPsi1, 10), CanonicalError);
}

TEST_CASE("canonical series satisfies the Riccati equation near 0") {
  const Params p{1.0, 0.0, 2.6781168019065467};
  const auto c = canonical_series(p, Canonical::kPsi1, 30).series_coefficients;
  const cplx tau(0.0, -0.05);
  const double h = 1e-6;
  const cplx deriv = (evaluate_series(c, tau + h) - evaluate_series(c, tau - h)) / (2.0 * h);
  CHECK(std::abs(deriv - riccati_rhs(p, tau, evaluate_series(c, tau))) < 1e-6);
}

TEST_CASE("seed radius protocol at an adjacency") {
  const SeedChoice seed = choose_seed_radius({1.0, 0.0, 2.6781168019065467}, Canonical::kPsi1, 20);
  CHECK(seed.accepted);
  CHECK(seed.radius >= 0.01);
  CHECK(seed.agreement < 1e-9);
}

TEST_CASE("condition (*) and pole count at an adjacency") {
  const Params p{1.0, 1.0, 4.0459611424};
  const ConditionStar cs = condition_star(p);
  CHECK(cs.holds);
  CHECK(cs.branch == 1);
  CHECK(cs.psi1.count == 0);
  REQUIRE(cs.rho_from_poles.has_value());
  CHECK(*cs.rho_from_poles == doctest::Approx(1.0).epsilon(1e-9));
  const auto sol = continue_canonical(canonical_series(p, Canonical::kPsi1, 20), p);
  const PoleCount pc = count_poles_unit_disk(sol, p);
  CHECK(pc.count == 0);
  CHECK(pc.contour_residual < 0.1);
  CHECK(std::abs(pc.quadrature_count) < 1e-3);
}
