#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sudler/sudler.hpp"

namespace sudler {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct CheckOptions {
  /// Largest q_n evaluated; the acceptance suite uses the desk bound 10^7,
  /// selfcheck --quick uses 10^5.
  std::uint64_t q_bound = 10'000'000;
  unsigned precision_bits = kDefaultPrecisionBits;
  unsigned threads = 0;
  std::uint64_t seed = 20240611;  ///< random coprime pairs for the sine identity
};

/// Number of acceptance criteria.
inline constexpr int kCriterionCount = 12;

/// Runs the acceptance criteria in order, calling `on_result` after each one.
/// Evaluations of P_{q_n} are shared between criteria within one call.
std::vector<CheckResult> run_checks(const CheckOptions& opt,
                                    const std::function<void(const CheckResult&)>& on_result = {});

/// "PASS [k] name: detail" / "FAIL [k] name: detail".
std::string format_check(const CheckResult& r);

}  // namespace sudler
