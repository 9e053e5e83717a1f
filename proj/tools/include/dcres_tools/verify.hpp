#pragma once

// Self-check suites behind `dcres verify`.

#include <string>
#include <vector>

namespace dcres::tools {

struct Check {
  std::string suite;
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// clifford, harmonics, specfun, wronskian, residual, conservation.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Throws ArgumentError for an
/// unknown name. Output is deterministic: fixed seeds, fixed ordering.
std::vector<Check> run_suite(const std::string& name, int threads = 1);

/// "suite/name  deviation  tolerance  PASS|FAIL" with fixed formatting.
std::string format_check(const Check& c);

}  // namespace dcres::tools
