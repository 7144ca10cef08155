#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sibson::checks {

struct SuiteReport {
  std::string name;
  int passed = 0;
  int failed = 0;
  std::string first_failure;  ///< description of the first violating instance
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  int instances = 500;
  int threads = 1;
};

/// Names accepted by run_suite, in the order `check properties` runs them.
const std::vector<std::string>& property_suite_names();
const std::vector<std::string>& tensorization_suite_names();
const std::vector<std::string>& ordering_suite_names();

/// Instance i draws from a generator seeded with (seed, i), so reports do not
/// depend on the thread count.
SuiteReport run_suite(const std::string& name, const SuiteOptions& options);

std::vector<SuiteReport> run_suites(const std::vector<std::string>& names, const SuiteOptions& options);

}  // namespace sibson::checks
