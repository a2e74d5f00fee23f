#include "cli.hpp"
#include "doctest.h"
#include "josephson/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using josephson::cli::run;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "josephson_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("rotnum on the zero axis is locked at 0") {
  const auto out = (scratch() / "rot.csv").string();
  CHECK(run({"rotnum", "--nu", "1", "--a", "0", "--s", "2.5", "--out", out}) == 0);
  CHECK(slurp(out) == "a,s,rho,locked_r\n0,2.5,0,0\n");
}

TEST_CASE("tongue at s = 0 for r = 1 is the single point sqrt 2") {
  const auto out = (scratch() / "tongue.csv").string();
  CHECK(run({"tongue", "--r", "1", "--s", "0", "--out", out, "--tol", "1e-11"}) == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("r,s,g_minus,g_plus,width\n1,0,1.41421356237", 0) == 0);
}

TEST_CASE("grid output is deterministic and independent of thread count") {
  const auto one = (scratch() / "g1.csv").string();
  const auto two = (scratch() / "g2.csv").string();
  const auto three = (scratch() / "g3.csv").string();
  CHECK(run({"grid", "--a-range", "-2:2:0.5", "--s-range", "0:2:1", "--out", one}) == 0);
  CHECK(run({"grid", "--a-range", "-2:2:0.5", "--s-range", "0:2:1", "--out", two}) == 0);
  CHECK(run({"grid", "--threads", "1", "--a-range", "-2:2:0.5", "--s-range", "0:2:1", "--out",
             three}) == 0);
  CHECK(slurp(one) == slurp(two));
  CHECK(slurp(one) == slurp(three));
  const std::string csv = slurp(one);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 27);
}

TEST_CASE("json output parses back") {
  const auto out = (scratch() / "m.json").string();
  CHECK(run({"monodromy", "--a", "0", "--s", "0", "--format", "json", "--out", out}) == 0);
  const auto rep = josephson::report_from_json(slurp(out));
  CHECK(rep.command == "monodromy");
  REQUIRE(rep.table.rows.size() == 1);
  CHECK(rep.table.columns.size() == 12);
  CHECK(std::get<double>(rep.table.rows[0][2]) == doctest::Approx(std::cosh(3.141592653589793)));
}

TEST_CASE("adjacency rows carry the condition (*) branch") {
  const auto out = (scratch() / "adj.csv").string();
  CHECK(run({"adjacency", "--r", "0", "--s-range", "0:4:0.1", "--out", out}) == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("r,a,s,identity_residual,condition_star_branch\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);  // one adjacency near s = 2.678
  CHECK(csv.find(",2.678116") != std::string::npos);
  CHECK(csv.back() == '\n');
  CHECK(csv[csv.size() - 2] == '1');
}

TEST_CASE("empty result writes a header-only file") {
  const auto out = (scratch() / "none.csv").string();
  CHECK(run({"adjacency", "--r", "1", "--s-range", "0:1:0.1", "--out", out}) == 0);
  CHECK(slurp(out) == "r,a,s,identity_residual,condition_star_branch\n");
}

TEST_CASE("invalid configurations exit with 2") {
  CHECK(run({}) == 2);
  CHECK(run({"rotnum", "--a", "1"}) == 2);             // missing --s
  CHECK(run({"rotnum", "--nu", "0", "--a", "1", "--s", "1"}) == 2);
  CHECK(run({"grid", "--a-range", "1:0:0.1", "--s-range", "0:1:1"}) == 2);
  CHECK(run({"grid", "--a-range", "0:1:0.5", "--s-range", "0:1:1", "--format", "xml"}) == 2);
  CHECK(run({"frobnicate"}) == 2);
  CHECK(run({"rotnum", "--a", "1", "--s", "1", "--tol", "-1"}) == 2);
  CHECK(run({"rotnum", "--a", "1", "--s", "1", "--out",
             (scratch() / "no" / "such" / "dir.csv").string()}) == 2);
}

TEST_CASE("numerical failure exits with 3") {
  // A tolerance below the integrator accuracy cannot be met.
  CHECK(run({"rotnum", "--a", "1.3", "--s", "3.25", "--tol", "1e-16", "--out",
             (scratch() / "nf.csv").string()}) == 3);
}
