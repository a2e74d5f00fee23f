#include "doctest.h"
#include "josephson/sweep.hpp"

#include <cstring>

using namespace josephson;

TEST_CASE("range parsing") {
  const Range r = Range::parse("-3:3:0.1");
  CHECK(r.values().size() == 61);
  CHECK(r.values().front() == -3.0);
  CHECK(r.values().back() == doctest::Approx(3.0));
  CHECK(Range::parse("0:10:0.25").values().size() == 41);
  CHECK(Range::parse("2.5").values() == std::vector<double>{2.5});
  CHECK_THROWS_AS(Range::parse("1:0:0.1"), std::invalid_argument);
  CHECK_THROWS_AS(Range::parse("0:1:0"), std::invalid_argument);
  CHECK_THROWS_AS(Range::parse("0:1"), std::invalid_argument);
  CHECK_THROWS_AS(Range::parse("a:b:c"), std::invalid_argument);
}

TEST_CASE("parallel grid equals the serial reference bitwise") {
  const Range a = Range::parse("-1.5:1.5:0.5");
  const Range s = Range::parse("0:4:1");
  const auto par = rotation_grid(1.0, a, s, {}, Execution::kParallel);
  const auto ser = rotation_grid_serial(1.0, a, s);
  REQUIRE(par.size() == 35);
  REQUIRE(ser.size() == par.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].a == ser[i].a);
    CHECK(par[i].s == ser[i].s);
    CHECK(std::memcmp(&par[i].result.rho, &ser[i].result.rho, sizeof(double)) == 0);
    CHECK(par[i].result.locked_at == ser[i].result.locked_at);
  }
}

TEST_CASE("grid layout: s outer, a inner, rows monotone") {
  const auto g = rotation_grid(1.0, Range::parse("-2:2:0.5"), Range::parse("1:2:1"));
  REQUIRE(g.size() == 18);
  CHECK(g[0].s == 1.0);
  CHECK(g[8].a == 2.0);
  CHECK(g[9].s == 2.0);
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    if ((i + 1) % 9 == 0) continue;
    CHECK(g[i + 1].result.rho >= g[i].result.rho - 1e-9);
  }
}
