#pragma once

// Tabular results, acceptance checks and their serialization. CSV carries the
// table only (numbers with 15 significant digits); JSON carries the whole
// report at full precision and parses back to an equal report.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace josephson {

/// Empty cells stand for absent values (e.g. no locking, empty tongue slice).
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

/// Non-finite doubles become empty cells.
Cell number_cell(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);  // throws if the width is wrong
};

struct Check {
  int id = 0;
  std::string name;
  std::string claim;       // the mathematical statement under test
  bool pass = false;
  bool asserting = true;   // recorded-only checks never fail the suite
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct Provenance {
  std::string tool_version;
  std::map<std::string, double> tolerances;
  double wall_time_seconds = 0.0;  // console only; never written to files
};

struct Report {
  std::string command;
  std::vector<std::string> arguments;
  Table table;
  std::vector<Check> checks;
  std::vector<std::string> notes;  // per-point failures
  Provenance provenance;

  [[nodiscard]] bool all_checks_pass() const;
};

/// Equality used by the round-trip tests; wall time is ignored, and NaN
/// measurements compare equal to NaN.
bool operator==(const Report& x, const Report& y);

std::string format_number(double v);  // %.15g
std::string to_csv(const Table& table);
std::string to_json(const Report& report);
Report report_from_json(const std::string& text);

enum class Format { kCsv, kJson };

class ReportIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Serializes `report` in the given format and writes it to `path`
/// ("-" means standard output).
void emit(const Report& report, Format format, const std::string& path);

}  // namespace josephson
