#pragma once

#include <string>
#include <vector>

#include "minsurf/report.hpp"

namespace minsurf::acceptance {

inline constexpr int kCriteria = 14;

struct Criterion {
  int number = 0;
  std::string title;
  std::vector<report::Entry> checks;
  bool pass() const { return !checks.empty() && report::all_pass(checks); }
};

/// Runs one criterion (1..14). A library error inside a criterion becomes a
/// failing entry `<n>.error` rather than propagating. Throws InvalidInput for
/// an unknown number.
Criterion run(int number);

/// Criteria selected by name: "all" or a comma-separated list of numbers.
std::vector<int> select(const std::string& suite);

std::vector<report::Entry> flatten(const std::vector<Criterion>& criteria);

}  // namespace minsurf::acceptance
