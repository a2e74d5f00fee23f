#include "doctest.h"
#include "josephson/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace josephson;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Report sample_report() {
  Report r;
  r.command = "tongue";
  r.arguments = {"tongue", "--r", "1", "--s-range", "0:1:0.5"};
  r.table.columns = {"r", "s", "g_minus", "g_plus", "width"};
  r.table.add_row({std::int64_t{1}, 0.0, std::sqrt(2.0), std::sqrt(2.0), 1e-12});
  r.table.add_row({std::int64_t{1}, 0.5, 0.1 + 0.2, 1.0 / 3.0, std::monostate{}});
  r.checks.push_back({3, "queer", "claim, with comma", true, true, 1e-13, 1e-6, "detail"});
  r.checks.push_back({13, "recorded", "x", true, false, std::nan(""), std::nan(""), ""});
  r.notes = {"s=0.5: note"};
  r.provenance.tool_version = "0.1.0";
  r.provenance.tolerances["boundary_a"] = 1e-8;
  r.provenance.wall_time_seconds = 1.25;
  return r;
}

}  // namespace

TEST_CASE("numbers use 15 significant digits") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333333");
  CHECK(format_number(std::sqrt(2.0)) == "1.4142135623731");
  CHECK(format_number(-2.5e-12) == "-2.5e-12");
  CHECK(format_number(3.0) == "3");
}

TEST_CASE("CSV with no rows is header only") {
  Table t;
  t.columns = {"a", "s", "rho", "locked_r"};
  CHECK(to_csv(t) == "a,s,rho,locked_r\n");
}

TEST_CASE("CSV row count equals record count") {
  const Report r = sample_report();
  const std::string csv = to_csv(r.table);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(r.table.rows.size()));
  CHECK(csv.find("1,0.5,0.3,0.333333333333333,\n") != std::string::npos);
}

TEST_CASE("JSON round trip is the identity") {
  const Report r = sample_report();
  const std::string text = to_json(r);
  const Report back = report_from_json(text);
  CHECK(back == r);
  CHECK(to_json(back) == text);
  // Full precision survives, unlike the CSV form.
  CHECK(std::get<double>(back.table.rows[1][2]) == 0.1 + 0.2);
  CHECK(text.find("wall") == std::string::npos);
}

TEST_CASE("report equality notices changes") {
  Report r = sample_report();
  Report changed = r;
  changed.table.rows[0][1] = 0.25;
  CHECK_FALSE(changed == r);
  changed = r;
  changed.checks[0].pass = false;
  CHECK_FALSE(changed == r);
}

TEST_CASE("table rejects rows of the wrong width") {
  Table t;
  t.columns = {"a", "b"};
  CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
  CHECK(number_cell(NAN).index() == 0);
}

TEST_CASE("malformed JSON is rejected") {
  CHECK_THROWS_AS(report_from_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(report_from_json("{\"command\": 1}"), std::invalid_argument);
}

TEST_CASE("emit writes files and reports the path on failure") {
  const auto dir = std::filesystem::temp_directory_path() / "josephson_report_test";
  std::filesystem::create_directories(dir);
  const Report r = sample_report();
  emit(r, Format::kCsv, (dir / "t.csv").string());
  CHECK(read_file(dir / "t.csv") == to_csv(r.table));
  emit(r, Format::kJson, (dir / "t.json").string());
  CHECK(report_from_json(read_file(dir / "t.json")) == r);
  const std::string bad = (dir / "missing" / "x.csv").string();
  try {
    emit(r, Format::kCsv, bad);
    FAIL("expected an I/O error");
  } catch (const ReportIoError& e) {
    CHECK(std::string(e.what()).find(bad) != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}
