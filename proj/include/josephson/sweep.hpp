#pragma once

// Parameter-grid sweeps of the rotation number. The OpenMP kernel and the
// serial reference loop must produce bitwise-identical results; every grid
// point is an independent computation and results are stored by index.

#include <string>
#include <vector>

#include "josephson/torus_flow.hpp"

namespace josephson {

/// Closed range lo:hi:step; hi is included when it lies on the lattice.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;

  /// Parses "lo:hi:step" (or a single value "v" meaning v:v:1).
  static Range parse(const std::string& text);
  [[nodiscard]] std::vector<double> values() const;
  void validate() const;
};

struct GridPoint {
  double a = 0.0;
  double s = 0.0;
  RotationResult result;
};

struct SweepOptions {
  int max_periods = 1 << 18;
  RotationOptions rotation{};
  IntegratorConfig integrator = torus_integrator_config();
};

/// Row-major over s (outer) and a (inner): index = i_s * n_a + i_a.
std::vector<GridPoint> rotation_grid(double nu, const Range& a_range, const Range& s_range,
                                     const SweepOptions& opts = {},
                                     Execution exec = Execution::kParallel);

/// Reference implementation: plain nested loop, no OpenMP.
std::vector<GridPoint> rotation_grid_serial(double nu, const Range& a_range,
                                            const Range& s_range,
                                            const SweepOptions& opts = {});

}  // namespace josephson
