#include <cstdlib>
#include <iostream>

#include "sudler/checks.hpp"

int main() {
  const sudler::CheckOptions opt;
  int failures = 0;
  sudler::run_checks(opt, [&](const sudler::CheckResult& r) {
    std::cout << sudler::format_check(r) << std::endl;
    if (!r.pass) ++failures;
  });
  std::cout << (sudler::kCriterionCount - failures) << "/" << sudler::kCriterionCount << " criteria passed\n";
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
