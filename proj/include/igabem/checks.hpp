#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace igabem {

struct CheckResult {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass() const { return deviation <= tolerance; }
};

// Oracle suites behind `igabem check <suite>`: moments, qi, product, geometry.
std::vector<CheckResult> run_check(const std::string& suite, std::uint64_t seed);
std::vector<std::string> check_suites();

}  // namespace igabem
