#pragma once

// Built-in invariant suites behind `permred selftest`: gadget constants,
// the multiplication identity of phi, unitary-permanent bounds, and a small
// end-to-end round trip.  Returns structured results so callers own the
// reporting and the exit code.

#include "permred/numerics.hpp"

#include <string>
#include <vector>

namespace permred {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // on failure: what was measured
};

struct SelftestOptions {
  bool quick = false;        // reduced trial counts
  bool corrupt_ns1 = false;  // debug hook: perturb the W block, checks must fail
  Prec p = kDefaultPrec;
};

std::vector<CheckResult> run_selftest(const SelftestOptions& opts);

}  // namespace permred
