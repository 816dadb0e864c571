#pragma once

#include <functional>
#include <string>
#include <vector>

namespace parisi {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double observed = 0;   // worst observed residual/margin, criterion-specific
  double threshold = 0;
  double seconds = 0;
  std::string detail;
};

/// Runs the acceptance criteria in order, printing one pass/fail line per
/// criterion to `sink` (stdout when empty). Returns all results.
std::vector<CriterionResult> run_selftest(const std::function<void(const std::string&)>& sink = {},
                                          int threads = 0);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace parisi
