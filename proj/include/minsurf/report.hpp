#pragma once

#include <string>
#include <vector>

namespace minsurf::report {

/// One measured check. `threshold` is the bound that `measured` is compared
/// against; the direction of the comparison is part of the check itself.
struct Entry {
  std::string id;
  std::string paper_ref;
  double measured = 0;
  double threshold = 0;
  bool pass = false;
};

/// JSON array of {id, paper_ref, measured, threshold, pass}; `[]` when empty.
/// Non-finite numbers are written as null.
std::string to_json(const std::vector<Entry>& entries);

/// CSV with header id,paper_ref,measured,threshold,pass.
std::string to_csv(const std::vector<Entry>& entries);

bool all_pass(const std::vector<Entry>& entries);

}  // namespace minsurf::report
