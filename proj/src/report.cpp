#include "josephson/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "json.hpp"

namespace josephson {

using nlohmann::json;

Cell number_cell(double v) {
  if (!std::isfinite(v)) return std::monostate{};
  return v;
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("table row has " + std::to_string(row.size()) +
                                " cells, expected " + std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

bool Report::all_checks_pass() const {
  for (const auto& c : checks) {
    if (c.asserting && !c.pass) return false;
  }
  return true;
}

namespace {

bool same_double(double x, double y) {
  return (std::isnan(x) && std::isnan(y)) || x == y;
}

bool same_check(const Check& x, const Check& y) {
  return x.id == y.id && x.name == y.name && x.claim == y.claim && x.pass == y.pass &&
         x.asserting == y.asserting && same_double(x.measured, y.measured) &&
         same_double(x.tolerance, y.tolerance) && x.detail == y.detail;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(const std::string& v) const { return csv_field(v); }
  } visitor;
  return std::visit(visitor, c);
}

json cell_json(const Cell& c) {
  struct {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(std::int64_t v) const { return v; }
    json operator()(double v) const { return v; }
    json operator()(const std::string& v) const { return v; }
  } visitor;
  return std::visit(visitor, c);
}

Cell cell_from_json(const json& j) {
  if (j.is_null()) return std::monostate{};
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw std::invalid_argument("report: unexpected cell type");
}

// JSON has no NaN; absent measurements are written as null.
json number_json(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double number_from_json(const json& j) {
  return j.is_null() ? std::nan("") : j.get<double>();
}

}  // namespace

bool operator==(const Report& x, const Report& y) {
  if (x.command != y.command || x.arguments != y.arguments || x.notes != y.notes) return false;
  if (x.table.columns != y.table.columns || x.table.rows != y.table.rows) return false;
  if (x.checks.size() != y.checks.size()) return false;
  for (std::size_t i = 0; i < x.checks.size(); ++i) {
    if (!same_check(x.checks[i], y.checks[i])) return false;
  }
  return x.provenance.tool_version == y.provenance.tool_version &&
         x.provenance.tolerances == y.provenance.tolerances;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_field(table.columns[i]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Report& report) {
  json j;
  j["command"] = report.command;
  j["arguments"] = report.arguments;
  j["columns"] = report.table.columns;
  json rows = json::array();
  for (const auto& row : report.table.rows) {
    json r = json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"id", c.id},
                      {"name", c.name},
                      {"claim", c.claim},
                      {"pass", c.pass},
                      {"asserting", c.asserting},
                      {"measured", number_json(c.measured)},
                      {"tolerance", number_json(c.tolerance)},
                      {"detail", c.detail}});
  }
  j["checks"] = std::move(checks);
  j["notes"] = report.notes;
  j["provenance"] = {{"tool_version", report.provenance.tool_version},
                     {"tolerances", report.provenance.tolerances}};
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  Report r;
  try {
    const json j = json::parse(text);
    r.command = j.at("command").get<std::string>();
    r.arguments = j.at("arguments").get<std::vector<std::string>>();
    r.table.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& row : j.at("rows")) {
      std::vector<Cell> cells;
      for (const auto& c : row) cells.push_back(cell_from_json(c));
      r.table.add_row(std::move(cells));
    }
    for (const auto& c : j.at("checks")) {
      Check k;
      k.id = c.at("id").get<int>();
      k.name = c.at("name").get<std::string>();
      k.claim = c.at("claim").get<std::string>();
      k.pass = c.at("pass").get<bool>();
      k.asserting = c.at("asserting").get<bool>();
      k.measured = number_from_json(c.at("measured"));
      k.tolerance = number_from_json(c.at("tolerance"));
      k.detail = c.at("detail").get<std::string>();
      r.checks.push_back(std::move(k));
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
    const auto& prov = j.at("provenance");
    r.provenance.tool_version = prov.at("tool_version").get<std::string>();
    r.provenance.tolerances = prov.at("tolerances").get<std::map<std::string, double>>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("report: malformed JSON: ") + e.what());
  }
  return r;
}

void emit(const Report& report, Format format, const std::string& path) {
  const std::string body = format == Format::kCsv ? to_csv(report.table) : to_json(report);
  if (path == "-") {
    std::cout << body << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ReportIoError("cannot open '" + path + "' for writing");
  out << body;
  out.flush();
  if (!out) throw ReportIoError("write to '" + path + "' failed");
}

}  // namespace josephson
