// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line each. Exit code is nonzero on any failure.

#include <cstdio>

#include "parisi/selftest.hpp"

int main() {
  const auto results = parisi::run_selftest();
  int failed = 0;
  for (const auto& r : results)
    if (!r.pass) ++failed;
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
