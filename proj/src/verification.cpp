#include "josephson/verification.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>

#include "josephson/monodromy.hpp"
#include "josephson/special_functions.hpp"
#include "josephson/sweep.hpp"
#include "josephson/tongue.hpp"

namespace josephson {

namespace {

constexpr std::uint32_t kSeed = 1729;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fixed(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Check make_check(int id) {
  const auto& info = acceptance_criteria().at(id - 1);
  Check c;
  c.id = id;
  c.name = info.name;
  c.claim = info.claim;
  return c;
}

struct Sample {
  double a;
  double s;
};

std::vector<Sample> random_points(std::mt19937& rng, int n, double a_lo, double a_hi,
                                  double s_lo, double s_hi) {
  std::vector<Sample> out(n);
  for (auto& p : out) {
    p.a = uniform_from(rng(), a_lo, a_hi);
    p.s = uniform_from(rng(), s_lo, s_hi);
  }
  return out;
}

double inf_norm(const Mat2& m) {
  return std::max(std::abs(m(0, 0)) + std::abs(m(0, 1)), std::abs(m(1, 0)) + std::abs(m(1, 1)));
}

Mat2 minus(const Mat2& x, const Mat2& y) {
  Mat2 d;
  for (int k = 0; k < 4; ++k) d.m[k] = x.m[k] - y.m[k];
  return d;
}

}  // namespace

double uniform_from(std::uint32_t raw, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(raw) / 4294967296.0);
}

const std::vector<CriterionInfo>& acceptance_criteria() {
  static const std::vector<CriterionInfo> list = {
      {1, "zero-axis locking", "rho(nu=1, a=0, s) = 0 with a locking witness, s in {0.5,1,2.5,5,10}"},
      {2, "autonomous closed form", "rho(a, 0) = sqrt(a^2 - 1) for a in {1.5,2,3,5}"},
      {3, "queer adjacency", "tongue r=1 meets s=0 at the single abscissa sqrt(r^2 + nu^2)"},
      {4, "rotation bounds", "a - 1 <= rho <= a + 1 for |nu| <= 1, strict away from (+-1, 0)"},
      {5, "monotonicity and symmetry",
       "rho nondecreasing in a; rho(a,-s) = rho(a,s); rho(-a,s) = -rho(a,s)"},
      {6, "integer abscissas", "adjacencies of tongues r=0,1,2 have abscissa a = r"},
      {7, "trivial monodromy at adjacencies", "M = I at an adjacency with integer a"},
      {8, "determinant identity", "det M = exp(2 pi i a)"},
      {9, "projectivization", "Moebius action of M on e^{ix} reproduces the period map"},
      {10, "closed-form monodromy", "M = [[cosh pi, -sinh pi], [-sinh pi, cosh pi]] at a = s = 0"},
      {11, "Bessel asymptotics", "tongue boundaries g-+_r(s) = r -+ |J_r(s)| + o(s^{-1/2})"},
      {12, "pole-count formula",
       "condition (*) holds at adjacencies, rho = a - 2 #poles gives r, a - r even"},
      {13, "condition (*) at nu = 2 (recorded)",
       "adjacencies for nu = 2 located and condition (*) evaluated; outcome recorded"},
      {14, "canonical series", "c_1 = -nu/s exactly; truncation orders agree at a usable radius"},
  };
  return list;
}

struct AcceptanceSuite::Cache {
  std::optional<std::vector<GridPoint>> grid;
  std::optional<std::array<AdjacencySearch, 3>> adjacencies;  // nu = 1, r = 0, 1, 2
};

AcceptanceSuite::AcceptanceSuite(Execution exec) : exec_(exec), cache_(std::make_unique<Cache>()) {}
AcceptanceSuite::~AcceptanceSuite() = default;

namespace {

const Range kGridA{-3.0, 3.0, 0.1};
const Range kGridS{0.0, 10.0, 0.25};

const std::vector<GridPoint>& grid(std::optional<std::vector<GridPoint>>& slot, Execution exec) {
  if (!slot) slot = rotation_grid(1.0, kGridA, kGridS, SweepOptions{}, exec);
  return *slot;
}

const std::array<AdjacencySearch, 3>& adjacencies(
    std::optional<std::array<AdjacencySearch, 3>>& slot, Execution exec) {
  if (!slot) {
    std::array<AdjacencySearch, 3> found;
    for (long r = 0; r < 3; ++r) {
      found[r] = find_adjacencies(r, 1.0, {0.0, 12.0}, 1e-6, AdjacencyOptions{}, exec);
    }
    slot = std::move(found);
  }
  return *slot;
}

// The first two adjacencies of each tongue, or fewer if the search came up short.
std::vector<Adjacency> first_two(const std::array<AdjacencySearch, 3>& all) {
  std::vector<Adjacency> out;
  for (const auto& search : all) {
    for (std::size_t k = 0; k < std::min<std::size_t>(2, search.found.size()); ++k) {
      out.push_back(search.found[k]);
    }
  }
  return out;
}

Check criterion_1(Execution exec) {
  Check c = make_check(1);
  c.tolerance = 1e-9;
  c.pass = true;
  double worst = 0.0;
  for (double s : {0.5, 1.0, 2.5, 5.0, 10.0}) {
    const Params p{1.0, 0.0, s};
    const RotationResult rot = rotation_number(p, torus_integrator_config(), 1 << 18, {}, exec);
    const LockingWitness w = locking_witness(p, 0);
    const double err = std::abs(rot.rho) + rot.residual;
    worst = std::max(worst, err);
    const bool ok = rot.locked_at == 0L && w.locked() && rot.residual < c.tolerance;
    c.pass = c.pass && ok;
    c.detail += "s=" + fixed(s, 1) + ": rho=" + format_number(rot.rho) + " residual=" +
                sci(rot.residual) + " witness=[" + sci(w.min_dev) + "," + sci(w.max_dev) +
                "]; ";
  }
  c.measured = worst;
  return c;
}

// Independent oracle: 2 pi / T with T = int_0^{2pi} dx / (a + sin x), by the
// trapezoidal rule (spectrally accurate for periodic analytic integrands).
double autonomous_oracle(double a) {
  constexpr int n = 8192;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += 1.0 / (a + std::sin(kTwoPi * k / n));
  const double period = kTwoPi * sum / n;
  return kTwoPi / period;
}

Check criterion_2(Execution exec) {
  Check c = make_check(2);
  c.tolerance = 1e-6;
  double worst = 0.0;
  for (double a : {1.5, 2.0, 3.0, 5.0}) {
    const double oracle = autonomous_oracle(a);
    const double closed = std::sqrt(a * a - 1.0);
    const RotationResult rot =
        rotation_number({1.0, a, 0.0}, torus_integrator_config(), 1 << 18, {}, exec);
    worst = std::max({worst, std::abs(rot.rho - closed), std::abs(oracle - closed),
                      std::abs(rot.rho - oracle)});
    c.detail += "a=" + fixed(a, 1) + ": rho=" + format_number(rot.rho) +
                " quadrature=" + format_number(oracle) + " closed=" + format_number(closed) +
                "; ";
  }
  c.measured = worst;
  c.pass = worst < c.tolerance;
  return c;
}

Check criterion_3() {
  Check c = make_check(3);
  c.tolerance = 1e-6;
  const TongueSlice slice = boundary_at(1, 0.0, 1.0, 1e-10);
  const double expected = std::sqrt(2.0);
  if (slice.empty) {
    c.detail = "tongue r=1 not found on s=0";
    c.measured = std::numeric_limits<double>::quiet_NaN();
    return c;
  }
  const double dev =
      std::max(std::abs(slice.g_minus - expected), std::abs(slice.g_plus - expected));
  c.measured = std::max(dev, slice.width);
  c.pass = dev < c.tolerance && slice.width < c.tolerance && slice.verified;
  c.detail = "g-=" + format_number(slice.g_minus) + " g+=" + format_number(slice.g_plus) +
             " width=" + sci(slice.width) + " verified=" + (slice.verified ? "yes" : "no");
  return c;
}

Check criterion_4(const std::vector<GridPoint>& g) {
  Check c = make_check(4);
  c.tolerance = 1e-8;
  double violation = 0.0;       // largest excess over a bound
  double strict_gap = std::numeric_limits<double>::infinity();
  int nonconverged = 0;
  for (const auto& pt : g) {
    const double lo = pt.a - 1.0, hi = pt.a + 1.0;
    violation = std::max({violation, lo - pt.result.rho, pt.result.rho - hi});
    if (!pt.result.converged) ++nonconverged;
    const bool near_corner =
        (std::abs(std::abs(pt.a) - 1.0) <= kGridA.step + 1e-9) && pt.s <= kGridS.step + 1e-9;
    if (!near_corner) {
      strict_gap = std::min({strict_gap, pt.result.rho - lo, hi - pt.result.rho});
    }
  }
  c.measured = violation;
  c.pass = violation <= c.tolerance && strict_gap > c.tolerance;
  c.detail = std::to_string(g.size()) + " points; max bound excess " + sci(violation) +
             "; smallest gap away from (+-1,0) " + sci(strict_gap) + "; " +
             std::to_string(nonconverged) + " points above the 1e-9 rotation tolerance";
  return c;
}

Check criterion_5(const std::vector<GridPoint>& g, Execution exec) {
  Check c = make_check(5);
  c.tolerance = 1e-7;
  constexpr double kMonotoneSlack = 1e-8;
  const std::size_t na = kGridA.values().size();
  double worst_drop = 0.0;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    if ((i + 1) % na == 0) continue;  // row boundary
    worst_drop = std::max(worst_drop, g[i].result.rho - g[i + 1].result.rho);
  }
  std::mt19937 rng(kSeed + 5);
  const auto pts = random_points(rng, 100, -3.0, 3.0, 0.0, 10.0);
  std::vector<double> sym_s(pts.size()), sym_a(pts.size());
  const auto cfg = torus_integrator_config();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto [a, s] = pts[k];
    const double base = rotation_number({1.0, a, s}, cfg, 1 << 18, {}, exec).rho;
    const double flip_s = rotation_number({1.0, a, -s}, cfg, 1 << 18, {}, exec).rho;
    const double flip_a = rotation_number({1.0, -a, s}, cfg, 1 << 18, {}, exec).rho;
    sym_s[k] = std::abs(base - flip_s);
    sym_a[k] = std::abs(base + flip_a);
  }
  const double worst_s = *std::max_element(sym_s.begin(), sym_s.end());
  const double worst_a = *std::max_element(sym_a.begin(), sym_a.end());
  c.measured = std::max(worst_s, worst_a);
  c.pass = worst_drop <= kMonotoneSlack && c.measured < c.tolerance;
  c.detail = "largest decrease along a row " + sci(worst_drop) + " (slack 1e-8); max |rho(a,s)-rho(a,-s)| " +
             sci(worst_s) + "; max |rho(-a,s)+rho(a,s)| " + sci(worst_a) + " over 100 points";
  return c;
}

Check criterion_6(const std::array<AdjacencySearch, 3>& all) {
  Check c = make_check(6);
  c.tolerance = 1e-6;
  c.pass = true;
  double worst = 0.0;
  for (long r = 0; r < 3; ++r) {
    const auto& found = all[r].found;
    if (found.size() < 2) {
      c.pass = false;
      c.detail += "r=" + std::to_string(r) + ": only " + std::to_string(found.size()) +
                  " adjacencies; ";
      for (const auto& f : all[r].failures) c.detail += "(" + f.reason + ") ";
    }
    for (std::size_t k = 0; k < std::min<std::size_t>(2, found.size()); ++k) {
      const Adjacency& adj = found[k];
      const double dev = std::abs(adj.a - static_cast<double>(r));
      worst = std::max({worst, dev, adj.identity_residual});
      c.pass = c.pass && dev < c.tolerance && adj.identity_residual < c.tolerance;
      c.detail += "r=" + std::to_string(r) + " s=" + fixed(adj.s, 8) + " |a-r|=" + sci(dev) +
                  " identity=" + sci(adj.identity_residual) + "; ";
    }
  }
  c.measured = worst;
  return c;
}

Check criterion_7(const std::vector<Adjacency>& adj) {
  Check c = make_check(7);
  c.tolerance = 1e-5;
  c.pass = !adj.empty();
  double worst = 0.0;
  for (const auto& x : adj) {
    const Monodromy m = monodromy({1.0, x.a, x.s});
    const double d = inf_norm(minus(m.matrix, Mat2::identity()));
    worst = std::max(worst, d);
    c.detail += "r=" + std::to_string(x.r) + " s=" + fixed(x.s, 4) + ": " + sci(d) + "; ";
  }
  c.measured = worst;
  c.pass = c.pass && worst < c.tolerance;
  return c;
}

Check criterion_8() {
  Check c = make_check(8);
  c.tolerance = 1e-8;
  std::mt19937 rng(kSeed + 8);
  double worst = 0.0;
  for (const auto& [a, s] : random_points(rng, 50, -3.0, 3.0, 0.0, 10.0)) {
    worst = std::max(worst, monodromy({1.0, a, s}).det_deviation);
  }
  c.measured = worst;
  c.pass = worst < c.tolerance;
  c.detail = "max over 50 points " + sci(worst);
  return c;
}

Check criterion_9() {
  Check c = make_check(9);
  c.tolerance = 1e-6;
  std::mt19937 rng(kSeed + 9);
  const auto cfg = torus_integrator_config();
  double worst = 0.0;
  for (const auto& [a, s] : random_points(rng, 10, -3.0, 3.0, 0.0, 10.0)) {
    const Params p{1.0, a, s};
    const Monodromy m = monodromy(p);
    for (int k = 0; k < 32; ++k) {
      const double x = kTwoPi * k / 32;
      const ProjPoint image = mobius_apply(m.matrix, {std::polar(1.0, x), false});
      const double diff = std::remainder(std::arg(image.value) - period_map(p, x, cfg), kTwoPi);
      worst = std::max(worst, image.infinite ? kPi : std::abs(diff));
    }
  }
  c.measured = worst;
  c.pass = worst < c.tolerance;
  c.detail = "max wrapped angle difference over 10 x 32 samples " + sci(worst);
  return c;
}

Check criterion_10() {
  Check c = make_check(10);
  c.tolerance = 1e-7;
  const Monodromy m = monodromy({1.0, 0.0, 0.0});
  const double ch = std::cosh(kPi), sh = std::sinh(kPi);
  const Mat2 expected{{cplx(ch), cplx(-sh), cplx(-sh), cplx(ch)}};
  c.measured = max_abs_diff(m.matrix, expected);
  c.pass = c.measured < c.tolerance;
  c.detail = "max entry deviation " + sci(c.measured) + " (cosh pi = " + format_number(ch) + ")";
  return c;
}

Check criterion_11() {
  Check c = make_check(11);
  c.pass = true;
  double worst_ratio = 0.0;
  for (long r : {0L, 1L}) {
    for (double s : {15.0, 20.0, 25.0}) {
      const double tol = 1.5 / std::sqrt(s);
      const TongueSlice slice = boundary_at(r, s, 1.0);
      // The sign of J_r(-s) swaps the roles of the two boundaries; compare
      // the ordered pair against r -+ |J_r|.
      const double j = std::abs(bessel_j(static_cast<int>(r), -s));
      const double lo = static_cast<double>(r) - j, hi = static_cast<double>(r) + j;
      const double dev = slice.empty ? std::numeric_limits<double>::infinity()
                                     : std::max(std::abs(slice.g_minus - lo),
                                                std::abs(slice.g_plus - hi));
      worst_ratio = std::max(worst_ratio, dev / tol);
      c.pass = c.pass && dev < tol;
      c.detail += "r=" + std::to_string(r) + " s=" + fixed(s, 0) + ": [" +
                  fixed(slice.g_minus) + "," + fixed(slice.g_plus) + "] vs [" + fixed(lo) +
                  "," + fixed(hi) + "] dev " + sci(dev) + " < " + fixed(tol, 3) + "; ";
    }
  }
  c.measured = worst_ratio;
  c.tolerance = 1.0;  // deviation as a fraction of 1.5 s^{-1/2}
  return c;
}

Check criterion_12(const std::vector<Adjacency>& adj) {
  Check c = make_check(12);
  c.tolerance = 1e-6;
  c.pass = !adj.empty();
  double worst = 0.0;
  for (const auto& x : adj) {
    const Params p{1.0, x.a, x.s};
    const ConditionStar cs = condition_star(p);
    const BranchReport& br = cs.branch == 2 ? cs.psi2 : cs.psi1;
    const long a_int = std::lround(x.a);
    bool ok = cs.holds && br.count == 0 && cs.rho_from_poles.has_value() &&
              (a_int - x.r) % 2 == 0;
    const double dev = cs.rho_from_poles ? std::abs(*cs.rho_from_poles - x.r)
                                         : std::numeric_limits<double>::infinity();
    ok = ok && dev < c.tolerance;
    worst = std::max(worst, dev);
    c.pass = c.pass && ok;
    c.detail += "r=" + std::to_string(x.r) + " s=" + fixed(x.s, 4) + ": branch " +
                std::to_string(cs.branch) + " count " + std::to_string(br.count) +
                " |psi| in [" + fixed(br.min_modulus, 4) + "," + fixed(br.max_modulus, 4) +
                "] rho_poles-r " + sci(dev) + (br.error.empty() ? "" : " error: " + br.error) +
                "; ";
  }
  c.measured = worst;
  return c;
}

Check criterion_13(Execution exec) {
  Check c = make_check(13);
  c.asserting = false;
  c.tolerance = std::numeric_limits<double>::quiet_NaN();
  c.measured = std::numeric_limits<double>::quiet_NaN();
  bool complete = true;
  int holds = 0, total = 0;
  for (long r : {0L, 1L}) {
    const AdjacencySearch search = find_adjacencies(r, 2.0, {0.0, 12.0}, 1e-6, {}, exec);
    if (search.found.empty()) {
      complete = false;
      c.detail += "r=" + std::to_string(r) + ": no adjacency located; ";
      continue;
    }
    for (const Adjacency& x : search.found) {
      const ConditionStar cs = condition_star({2.0, x.a, x.s});
      complete = complete && (cs.psi1.evaluated || cs.psi2.evaluated);
      ++total;
      holds += cs.holds ? 1 : 0;
      c.detail += "r=" + std::to_string(r) + " a=" + fixed(x.a, 9) + " s=" + fixed(x.s, 8) +
                  ": holds=" + (cs.holds ? "yes" : "no") + " branch " +
                  std::to_string(cs.branch) + " poles(psi1)=" +
                  (cs.psi1.evaluated ? std::to_string(cs.psi1.count) : "n/a") + " max|psi1|=" +
                  fixed(cs.psi1.max_modulus, 4) + " zeros(psi2)=" +
                  (cs.psi2.evaluated ? std::to_string(cs.psi2.count) : "n/a") + " min|psi2|=" +
                  fixed(cs.psi2.min_modulus, 4) + "; ";
    }
  }
  c.detail = "condition (*) holds at " + std::to_string(holds) + " of " +
             std::to_string(total) + " adjacencies; " + c.detail;
  c.pass = complete;
  return c;
}

Check criterion_14(const std::vector<Adjacency>& adj) {
  Check c = make_check(14);
  c.tolerance = 1e-8;
  c.pass = !adj.empty();
  double worst = 0.0;
  bool exact = true;
  std::mt19937 rng(kSeed + 14);
  auto pts = random_points(rng, 20, -3.0, 3.0, 0.1, 10.0);
  for (const auto& x : adj) pts.push_back({x.a, x.s});
  for (const auto& [a, s] : pts) {
    for (double nu : {1.0, -0.5, 2.0}) {
      const auto coeffs = canonical_series({nu, a, s}, Canonical::kPsi1, 4).series_coefficients;
      exact = exact && coeffs[1] == cplx(-nu / s);
    }
  }
  double smallest_radius = std::numeric_limits<double>::infinity();
  for (const auto& x : adj) {
    const SeedChoice seed = choose_seed_radius({1.0, x.a, x.s}, Canonical::kPsi1, 20, 1e-8);
    c.pass = c.pass && seed.accepted && seed.radius >= 0.01;
    worst = std::max(worst, seed.agreement);
    smallest_radius = std::min(smallest_radius, seed.accepted ? seed.radius : 0.0);
  }
  c.pass = c.pass && exact;
  c.measured = worst;
  c.detail = std::string("c_1 == -nu/s bitwise at ") + std::to_string(3 * pts.size()) +
             " parameter points: " + (exact ? "yes" : "no") + "; seed radius >= " +
             fixed(smallest_radius, 2) + " at all " + std::to_string(adj.size()) +
             " adjacencies, worst order agreement " + sci(worst);
  return c;
}

}  // namespace

Check AcceptanceSuite::run(int id) {
  if (id < 1 || id > static_cast<int>(acceptance_criteria().size())) {
    throw std::out_of_range("no acceptance criterion " + std::to_string(id));
  }
  try {
    switch (id) {
      case 1: return criterion_1(exec_);
      case 2: return criterion_2(exec_);
      case 3: return criterion_3();
      case 4: return criterion_4(grid(cache_->grid, exec_));
      case 5: return criterion_5(grid(cache_->grid, exec_), exec_);
      case 6: return criterion_6(adjacencies(cache_->adjacencies, exec_));
      case 7: return criterion_7(first_two(adjacencies(cache_->adjacencies, exec_)));
      case 8: return criterion_8();
      case 9: return criterion_9();
      case 10: return criterion_10();
      case 11: return criterion_11();
      case 12: return criterion_12(first_two(adjacencies(cache_->adjacencies, exec_)));
      case 13: return criterion_13(exec_);
      case 14: return criterion_14(first_two(adjacencies(cache_->adjacencies, exec_)));
      default: break;
    }
  } catch (const std::exception& e) {
    Check c = make_check(id);
    c.pass = false;
    c.measured = std::numeric_limits<double>::quiet_NaN();
    c.detail = std::string("error: ") + e.what();
    return c;
  }
  return make_check(id);
}

std::vector<Check> AcceptanceSuite::run_all(const std::function<void(const Check&)>& on_check) {
  std::vector<Check> out;
  for (const auto& info : acceptance_criteria()) {
    out.push_back(run(info.id));
    if (on_check) on_check(out.back());
  }
  return out;
}

}  // namespace josephson
