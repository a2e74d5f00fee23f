#include "josephson/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace josephson {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

namespace {

constexpr int kPanels = 16;
constexpr int kNodesPerPanel = 16;

const GaussRule& panel_rule() {
  static const GaussRule rule = gauss_legendre(kNodesPerPanel);
  return rule;
}

}  // namespace

double bessel_j(int n, double x) {
  const GaussRule& rule = panel_rule();
  const double width = std::numbers::pi / kPanels;
  double sum = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double mid = (p + 0.5) * width;
    double panel = 0.0;
    for (int k = 0; k < kNodesPerPanel; ++k) {
      const double t = mid + 0.5 * width * rule.nodes[k];
      panel += rule.weights[k] * std::cos(n * t - x * std::sin(t));
    }
    sum += panel;
  }
  return sum * 0.5 * width / std::numbers::pi;
}

double bessel_j_series(int n, double x) {
  // J_{-n} = (-1)^n J_n
  const int m = std::abs(n);
  const double sign = (n < 0 && (m % 2 == 1)) ? -1.0 : 1.0;
  const long double half = 0.5L * x;
  long double term = 1.0L;
  for (int k = 1; k <= m; ++k) term *= half / k;  // (x/2)^m / m!
  long double sum = term;
  const long double q = -half * half;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<long double>(k) * (k + m));
    sum += term;
    if (std::abs(term) < 1e-22L * std::max(1.0L, std::abs(sum)) && k > std::abs(x)) break;
  }
  return sign * static_cast<double>(sum);
}

std::vector<double> bessel_j_zeros(int n, double x_max) {
  std::vector<double> zeros;
  const double step = 0.05;
  double lo = step;
  double f_lo = bessel_j(n, lo);
  for (double hi = lo + step; hi <= x_max + 1e-12; hi += step) {
    const double f_hi = bessel_j(n, hi);
    if (f_lo == 0.0) {
      zeros.push_back(lo);
    } else if (f_lo * f_hi < 0.0) {
      double a = lo, b = hi, fa = f_lo;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = bessel_j(n, mid);
        if (fa * fm <= 0.0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      zeros.push_back(0.5 * (a + b));
    }
    lo = hi;
    f_lo = f_hi;
  }
  return zeros;
}

}  // namespace josephson
