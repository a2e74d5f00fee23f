#include "cli.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "josephson/monodromy.hpp"
#include "josephson/report.hpp"
#include "josephson/sweep.hpp"
#include "josephson/tongue.hpp"
#include "josephson/verification.hpp"

namespace josephson::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  double nu = 1.0;
  std::optional<double> a;
  std::optional<double> s;
  std::optional<long> r;
  std::optional<std::string> a_range;
  std::optional<std::string> s_range;
  std::optional<double> tol;
  int threads = 0;  // 0: OpenMP default
  std::string format = "csv";
  std::string out = "-";
};

template <class T>
T require(const std::optional<T>& v, const char* flag, const std::string& command) {
  if (!v) throw InvalidConfig(command + " requires " + flag);
  return *v;
}

Range range_of(const std::optional<std::string>& text, const std::optional<double>& single,
               const char* flag, const std::string& command) {
  try {
    if (text) return Range::parse(*text);
  } catch (const std::invalid_argument& e) {
    throw InvalidConfig(std::string(flag) + ": " + e.what());
  }
  if (single) return Range{*single, *single, 1.0};
  throw InvalidConfig(command + " requires " + flag);
}

double positive_tol(const RunConfig& cfg, double fallback) {
  const double t = cfg.tol.value_or(fallback);
  if (!(t > 0.0)) throw InvalidConfig("--tol must be positive");
  return t;
}

Report base_report(const RunConfig& cfg, const std::vector<std::string>& args) {
  Report rep;
  rep.command = cfg.command;
  rep.arguments = args;
  rep.provenance.tool_version = kVersion;
  rep.provenance.tolerances["integrator_rel"] = torus_integrator_config().rel_tol;
  rep.provenance.tolerances["integrator_abs"] = torus_integrator_config().abs_tol;
  return rep;
}

Cell locked_cell(const RotationResult& r) {
  if (r.locked_at) return static_cast<std::int64_t>(*r.locked_at);
  return std::monostate{};
}

int cmd_rotnum(const RunConfig& cfg, Report& rep) {
  const double a = require(cfg.a, "--a", cfg.command);
  const double s = require(cfg.s, "--s", cfg.command);
  RotationOptions opts;
  opts.tol = positive_tol(cfg, opts.tol);
  rep.provenance.tolerances["rotation"] = opts.tol;
  const RotationResult res = rotation_number({cfg.nu, a, s}, torus_integrator_config(),
                                             1 << 18, opts, Execution::kParallel);
  rep.table.columns = {"a", "s", "rho", "locked_r"};
  rep.table.add_row({a, s, res.rho, locked_cell(res)});
  if (!res.converged) {
    rep.notes.push_back("rotation number not converged: residual " +
                        format_number(res.residual));
    return kNumericalFailure;
  }
  return kSuccess;
}

int cmd_grid(const RunConfig& cfg, Report& rep) {
  const Range ar = range_of(cfg.a_range, cfg.a, "--a-range", cfg.command);
  const Range sr = range_of(cfg.s_range, cfg.s, "--s-range", cfg.command);
  SweepOptions opts;
  opts.rotation.tol = positive_tol(cfg, opts.rotation.tol);
  rep.provenance.tolerances["rotation"] = opts.rotation.tol;
  const auto pts = rotation_grid(cfg.nu, ar, sr, opts, Execution::kParallel);
  rep.table.columns = {"a", "s", "rho", "locked_r"};
  for (const auto& p : pts) {
    rep.table.add_row({p.a, p.s, p.result.rho, locked_cell(p.result)});
    if (!p.result.converged) {
      rep.notes.push_back("a=" + format_number(p.a) + " s=" + format_number(p.s) +
                          ": not converged, residual " + format_number(p.result.residual));
    }
  }
  return kSuccess;
}

int cmd_tongue(const RunConfig& cfg, Report& rep) {
  const long r = require(cfg.r, "--r", cfg.command);
  const Range sr = range_of(cfg.s_range, cfg.s, "--s-range", cfg.command);
  const double tol = positive_tol(cfg, 1e-8);
  rep.provenance.tolerances["boundary_a"] = tol;
  const auto slices = width_function(r, cfg.nu, sr.values(), 0, tol, Execution::kParallel, true);
  rep.table.columns = {"r", "s", "g_minus", "g_plus", "width"};
  for (const auto& sl : slices) {
    rep.table.add_row({static_cast<std::int64_t>(sl.r), sl.s, number_cell(sl.g_minus),
                       number_cell(sl.g_plus), number_cell(sl.width)});
    if (sl.empty) {
      rep.notes.push_back("s=" + format_number(sl.s) + ": tongue not found in bracket");
    } else if (!sl.verified) {
      rep.notes.push_back("s=" + format_number(sl.s) + ": locking predicate disagrees");
    }
  }
  return kSuccess;
}

int cmd_adjacency(const RunConfig& cfg, Report& rep) {
  const long r = require(cfg.r, "--r", cfg.command);
  Range sr{0.0, 12.0, 0.1};
  if (cfg.s_range) sr = range_of(cfg.s_range, std::nullopt, "--s-range", cfg.command);
  AdjacencyOptions opts;
  opts.scan_step = sr.step;
  const double tol = positive_tol(cfg, opts.identity_tol);
  opts.identity_tol = tol;
  rep.provenance.tolerances["identity"] = tol;
  const AdjacencySearch found =
      find_adjacencies(r, cfg.nu, {sr.lo, sr.hi}, tol, opts, Execution::kParallel);
  rep.table.columns = {"r", "a", "s", "identity_residual", "condition_star_branch"};
  for (const auto& adj : found.found) {
    const ConditionStar cs = condition_star({cfg.nu, adj.a, adj.s});
    rep.table.add_row({static_cast<std::int64_t>(adj.r), adj.a, adj.s, adj.identity_residual,
                       static_cast<std::int64_t>(cs.branch)});
  }
  for (const auto& f : found.failures) {
    rep.notes.push_back("near a=" + format_number(f.a_guess) + " s=" + format_number(f.s_guess) +
                        ": " + f.reason);
  }
  return kSuccess;
}

int cmd_monodromy(const RunConfig& cfg, Report& rep) {
  const double a = require(cfg.a, "--a", cfg.command);
  const double s = require(cfg.s, "--s", cfg.command);
  IntegratorConfig ic;
  if (cfg.tol) ic.rel_tol = positive_tol(cfg, ic.rel_tol);
  rep.provenance.tolerances["integrator_rel"] = ic.rel_tol;
  rep.provenance.tolerances["integrator_abs"] = ic.abs_tol;
  const Monodromy m = monodromy({cfg.nu, a, s}, ic);
  rep.table.columns = {"a",      "s",      "m11_re", "m11_im", "m12_re",        "m12_im",
                       "m21_re", "m21_im", "m22_re", "m22_im", "det_deviation", "projective_deviation"};
  std::vector<Cell> row = {a, s};
  for (const cplx& z : m.matrix.m) {
    row.emplace_back(z.real());
    row.emplace_back(z.imag());
  }
  row.emplace_back(m.det_deviation);
  row.emplace_back(m.projective_deviation);
  rep.table.add_row(std::move(row));
  return kSuccess;
}

int cmd_verify(const RunConfig&, Report& rep) {
  AcceptanceSuite suite(Execution::kParallel);
  rep.checks = suite.run_all([](const Check& c) {
    std::fprintf(stderr, "[%2d] %-9s %s: measured %s, tolerance %s\n", c.id,
                 !c.asserting ? "RECORDED" : (c.pass ? "PASS" : "FAIL"), c.name.c_str(),
                 format_number(c.measured).c_str(), format_number(c.tolerance).c_str());
  });
  rep.table.columns = {"id", "name", "pass", "asserting", "measured", "tolerance", "detail"};
  for (const auto& c : rep.checks) {
    rep.table.add_row({static_cast<std::int64_t>(c.id), c.name,
                       static_cast<std::int64_t>(c.pass), static_cast<std::int64_t>(c.asserting),
                       number_cell(c.measured), number_cell(c.tolerance), c.detail});
  }
  return rep.all_checks_pass() ? kSuccess : kCheckFailure;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Rotation numbers, phase-locking tongues and monodromy of "
               "dx/dt = nu sin x + a + s sin t"};
  app.fallthrough();
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--nu", cfg.nu, "coefficient of sin x (nonzero)");
  app.add_option("--a", cfg.a, "constant forcing a");
  app.add_option("--s", cfg.s, "amplitude s of the periodic forcing");
  app.add_option("--r", cfg.r, "tongue index (integer rotation number)");
  app.add_option("--a-range", cfg.a_range, "a values as lo:hi:step");
  app.add_option("--s-range", cfg.s_range, "s values as lo:hi:step");
  app.add_option("--tol", cfg.tol, "command tolerance override");
  app.add_option("--threads", cfg.threads, "OpenMP threads (default: all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.out, "output file, - for standard output");

  using Handler = int (*)(const RunConfig&, Report&);
  const std::vector<std::tuple<const char*, const char*, Handler>> commands = {
      {"rotnum", "rotation number at (a, s)", cmd_rotnum},
      {"grid", "rotation numbers over an (a, s) grid", cmd_grid},
      {"tongue", "boundaries of tongue r at each s", cmd_tongue},
      {"adjacency", "adjacencies of tongue r in an s range", cmd_adjacency},
      {"monodromy", "monodromy matrix of the linear system at (a, s)", cmd_monodromy},
      {"verify", "run the acceptance suite", cmd_verify},
  };
  for (const auto& [name, help, handler] : commands) app.add_subcommand(name, help);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidConfig;
  }

  Handler handler = nullptr;
  for (const auto& [name, help, h] : commands) {
    if (app.got_subcommand(name)) {
      cfg.command = name;
      handler = h;
    }
  }

  const auto started = std::chrono::steady_clock::now();
  Report rep;
  int code = kSuccess;
  try {
    Params{cfg.nu, 0.0, 0.0}.validate();
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    rep = base_report(cfg, args);
    code = handler(cfg, rep);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
  rep.provenance.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  try {
    emit(rep, cfg.format == "json" ? Format::kJson : Format::kCsv, cfg.out);
  } catch (const ReportIoError& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kInvalidConfig;
  }
  for (const auto& note : rep.notes) std::cerr << "note: " << note << "\n";
  std::fprintf(stderr, "%s: %zu rows in %.2f s\n", cfg.command.c_str(), rep.table.rows.size(),
               rep.provenance.wall_time_seconds);
  return code;
}

}  // namespace josephson::cli
