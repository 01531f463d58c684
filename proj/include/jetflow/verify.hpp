#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace jetflow {

struct CheckResult {
  std::string name;
  bool pass = false;
  /// Measured values and the bounds they were compared with.
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const;
};

// Acceptance checks. Each runs at its pinned tolerance and reports the
// measured values.
CheckResult check_interpolation(std::uint64_t seed);
CheckResult check_gradients(std::uint64_t seed);
CheckResult check_energy();
CheckResult check_noether();
CheckResult check_circulation();
CheckResult check_curvature(std::uint64_t seed);
CheckResult check_convergence();
CheckResult check_vortex();
CheckResult check_spectral(std::uint64_t seed);
CheckResult check_comparison();

/// interpolation, gradients, conservation, curvature, convergence, vortex,
/// spectral, comparison.
std::vector<std::string> suite_names();

/// Runs one suite, or every suite for "all". Throws ConfigError for an
/// unknown name.
SuiteReport run_suite(const std::string& name, std::uint64_t seed);

/// One "PASS name: detail" / "FAIL name: detail" line per check.
void print_report(std::ostream& out, const SuiteReport& report);

}  // namespace jetflow
