#pragma once

#include <sibson/prob.hpp>

#include <string>
#include <vector>

namespace sibson::cli {

/// α-axis of a sweep, e.g. "0.1:10:100" with optional limit points.
struct SweepSpec {
  enum class Scale { Linear, Log };
  double alpha_min = 0;
  double alpha_max = 0;
  int points = 0;
  Scale scale = Scale::Linear;
  bool include_zero = false;
  bool include_one = false;
  bool include_inf = false;

  /// "min:max:points"; `limits` is a comma list drawn from {0, 1, inf}.
  static SweepSpec parse(const std::string& range, const std::string& scale = "linear",
                         const std::string& limits = "");
  /// Ascending, with the requested limit points merged in.
  std::vector<double> values() const;
};

/// Table plus a flag per column marking information-valued (nats) columns,
/// which `--base 2` rescales.
struct Output {
  Table table;
  std::vector<bool> info;
};

/// Exit codes: 0 success, 1 validation or usage error, 2 solver non-convergence.
int run(int argc, char** argv);

}  // namespace sibson::cli
