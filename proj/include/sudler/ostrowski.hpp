#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sudler/alpha_spec.hpp"
#include "sudler/continued_fraction.hpp"

namespace sudler {

/// Ostrowski numeration base built from a finite coefficient list, i.e. the
/// rational beta = [0; b_1, ..., b_L]. Denominators follow the same shifted
/// recurrence as ConvergentTable (q_0 = 0, q_1 = 1, q_{i+1} = b_i q_i + q_{i-1}).
/// Expansions are unique for 0 <= t < q_{L+1}.
///
/// Every Lambda_i(beta) = q_i beta - p_i is a multiple of 1/q_{L+1}, so the
/// base stores the integers q_{L+1} Lambda_i and all derived quantities stay
/// exact.
class OstrowskiBase {
 public:
  explicit OstrowskiBase(std::vector<Coefficient> coeffs);

  /// alpha_n^- = [0; a_{n-1}, ..., a_1] of the table's alpha (b_i = a_{n-i}).
  /// Its q_n equals q_n(alpha).
  static OstrowskiBase head_of(const ConvergentTable& table, std::size_t n);

  std::size_t length() const { return b_.size(); }
  Coefficient b(std::size_t i) const { return b_.at(i - 1); }
  const std::vector<Coefficient>& coefficients() const { return b_; }

  std::int64_t q(std::size_t i) const { return q_.at(i); }
  std::int64_t p(std::size_t i) const { return p_.at(i); }

  /// q_{L+1}: encode/decode/D_t accept t < validity_limit().
  std::int64_t validity_limit() const { return q_.back(); }

  mpq_class beta() const;

  /// q_{L+1} * Lambda_i(beta).
  std::int64_t lambda_scaled(std::size_t i) const { return lambda_scaled_.at(i); }
  mpq_class lambda(std::size_t i) const;
  /// c_i(beta) = q_i |Lambda_i(beta)|.
  mpq_class c(std::size_t i) const;
  long double c_value(std::size_t i) const;

 private:
  std::vector<Coefficient> b_;
  std::vector<std::int64_t> q_, p_, lambda_scaled_;
};

struct OstrowskiDigits {
  std::int64_t t = 0;
  std::vector<Coefficient> v;  ///< v_1..v_L (v[0] is v_1)

  /// N(t): index of the highest nonzero digit (0 for t = 0).
  std::size_t significant_length() const;
  Coefficient digit(std::size_t i) const { return i <= v.size() ? v[i - 1] : 0; }
};

/// Greedy expansion. Throws RangeError unless 0 <= t < base.validity_limit().
OstrowskiDigits ostrowski_encode(std::int64_t t, const OstrowskiBase& base);

/// True when v satisfies the digit constraints of `base`.
bool digits_valid(std::span<const Coefficient> v, const OstrowskiBase& base);

/// sum v_i q_i. Throws RangeError on a constraint violation.
std::int64_t ostrowski_decode(std::span<const Coefficient> v, const OstrowskiBase& base);

/// "v1,v2,...,vN" up to N(t); "0" for t = 0.
std::string format_digits(const OstrowskiDigits& d);

/// D_t(beta) from the Ostrowski digits of t (closed form), exact.
mpq_class d_t_formula(std::int64_t t, const OstrowskiBase& base);

/// 2 q_{L+1} D_t(beta), which is always an integer.
std::int64_t d_t_formula_scaled(std::int64_t t, const OstrowskiBase& base);

/// 2 q_{L+1} D_t for t = 1..t_max (index 0 holds t = 1).
std::vector<std::int64_t> d_t_formula_scaled_range(std::int64_t t_max, const OstrowskiBase& base);

/// sum_{s=1}^t ({beta s} - 1/2) by direct summation, exact.
mpq_class d_t_bruteforce(std::int64_t t, const mpq_class& beta);

/// Direct summation for a certified real beta; {beta s} by exact fixed-point
/// wraparound.
long double d_t_bruteforce(std::int64_t t, const HighPrecisionAlpha& beta);

struct LogBoundReport {
  std::int64_t t_max = 0;
  bool coefficient_bound_holds = true;  ///< |D_t| <= 3/2 sum_{i<=N(t)} b_i
  bool digit_bound_holds = true;        ///< |D_t| <= 3/2 sum_i v_i
  long double max_abs_dt = 0;
  std::int64_t argmax_abs_dt = 0;
  long double max_ratio_to_log = 0;   ///< max |D_t| / log(t+1)
  std::size_t max_digit_count = 0;    ///< max N(t)
  long double max_digits_per_log = 0; ///< max N(t) / log(t+1), t >= 2
};

LogBoundReport d_t_logbound_check(const OstrowskiBase& base, std::int64_t t_max);

}  // namespace sudler
