#pragma once

// Bundled oracle suites: each compares a fast path against exhaustive
// enumeration or checks an exact identity over a fixed input family.

#include <string>
#include <vector>

namespace sqfree {

struct SuiteResult {
  std::string name;
  bool passed;
  std::string detail;
};

const std::vector<std::string>& suite_names();

// Throws PreconditionError for an unknown name.
SuiteResult run_suite(const std::string& name, unsigned threads = 1);

}  // namespace sqfree
