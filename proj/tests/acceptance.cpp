// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <vector>

#include "jetflow/verify.hpp"

using namespace jetflow;

int main() {
  constexpr std::uint64_t seed = 20240601;
  const std::vector<std::function<CheckResult()>> criteria = {
      [] { return check_interpolation(seed); },
      [] { return check_gradients(seed); },
      check_energy,
      check_noether,
      check_circulation,
      [] { return check_curvature(seed); },
      check_convergence,
      check_vortex,
      [] { return check_spectral(seed); },
      check_comparison,
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    const CheckResult r = criteria[k]();
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    if (!r.pass) ++failed;
    std::cout << "[" << (k + 1) << "] " << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << took.count()
              << " s): " << r.detail << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
