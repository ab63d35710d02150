#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace crio {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick library-level self-checks across every module, seeded for reproducibility.
/// Each check catches its own exceptions and reports them as failures.
std::vector<CheckResult> verify_all(std::uint64_t seed);

}  // namespace crio
