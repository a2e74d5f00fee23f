#pragma once

#include <vector>

namespace josephson {

/// J_n(x) for integer n from the integral representation
///   J_n(x) = (1/pi) * int_0^pi cos(n t - x sin t) dt,
/// evaluated with a 256-node composite Gauss-Legendre rule (16 panels of 16
/// nodes). Absolute accuracy ~1e-12 for |x| <= 100 and moderate n.
double bessel_j(int n, double x);

/// Ascending power series, summed in long double. Used as an independent
/// check of bessel_j; reliable to ~1e-11 for |x| <= 12.
double bessel_j_series(int n, double x);

/// Positive zeros of J_n in (0, x_max], located by sign changes on a fine
/// grid and polished by bisection.
std::vector<double> bessel_j_zeros(int n, double x_max);

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n).
GaussRule gauss_legendre(int n);

}  // namespace josephson
