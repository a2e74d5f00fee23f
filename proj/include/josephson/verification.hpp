#pragma once

// The acceptance suite: fourteen numbered checks, each a self-contained
// experiment with its own tolerance. Expensive shared inputs (the rotation
// grid and the nu = 1 adjacencies) are computed once per suite.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "josephson/report.hpp"
#include "josephson/torus_flow.hpp"

namespace josephson {

struct CriterionInfo {
  int id = 0;
  std::string name;
  std::string claim;
};

/// Criteria 1..14 in order.
const std::vector<CriterionInfo>& acceptance_criteria();

class AcceptanceSuite {
 public:
  explicit AcceptanceSuite(Execution exec = Execution::kParallel);
  ~AcceptanceSuite();
  AcceptanceSuite(const AcceptanceSuite&) = delete;
  AcceptanceSuite& operator=(const AcceptanceSuite&) = delete;

  /// Runs one criterion. Exceptions from the numerics are caught and turned
  /// into a failed check carrying the message.
  Check run(int id);

  /// Runs all criteria in order, calling `on_check` after each.
  std::vector<Check> run_all(const std::function<void(const Check&)>& on_check = {});

 private:
  struct Cache;
  Execution exec_;
  std::unique_ptr<Cache> cache_;
};

/// Uniform double in [lo, hi) from the raw 32-bit output of the engine, so
/// that sample points do not depend on the standard library's distributions.
double uniform_from(std::uint32_t raw, double lo, double hi);

}  // namespace josephson
