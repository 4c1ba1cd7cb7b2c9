#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <vector>

#include "sudler/alpha_spec.hpp"
#include "sudler/certified.hpp"

namespace sudler {

/// Convergents of alpha = [0; a_1, a_2, ...] with the shifted indexing used
/// throughout this library:
///
///   q_0 = 0, q_1 = 1, q_{n+1} = a_n q_n + q_{n-1}
///   p_0 = 1, p_1 = 0, p_{n+1} = a_n p_n + p_{n-1}
///
/// so q_n is one index *later* than in most textbooks (q_2 = a_1). With this
/// convention p_n/q_n < alpha for odd n and > alpha for even n, and
/// p_n q_{n+1} - p_{n+1} q_n = (-1)^n.
class ConvergentTable {
 public:
  ConvergentTable() = default;
  explicit ConvergentTable(std::span<const Coefficient> cfc);

  /// Number of coefficients a_1..a_size().
  std::size_t size() const { return a_.size(); }

  Coefficient a(std::size_t n) const;  // 1-based
  /// q_n and p_n for 0 <= n <= size() + 1 (a_size() already fixes q_{size()+1}).
  const mpz_class& q(std::size_t n) const;
  const mpz_class& p(std::size_t n) const;

  /// q_0..q_size(): the size()+1 denominators reported for a coefficient list.
  std::vector<mpz_class> denominators() const;

  const std::vector<Coefficient>& coefficients() const { return a_; }

  /// Appends a_{size()+1}.
  void push_back(Coefficient next);

 private:
  std::vector<Coefficient> a_;
  std::vector<mpz_class> p_{1, 0};
  std::vector<mpz_class> q_{0, 1};
};

ConvergentTable convergents(std::span<const Coefficient> cfc);

/// Smallest table of `spec` whose last denominator exceeds `q_bound`
/// (at least `min_size` coefficients).
ConvergentTable convergents_until(const AlphaSpec& spec, const mpz_class& q_bound,
                                  std::size_t min_size = 1);

/// alpha_n^- = [0; a_{n-1}, ..., a_1] = q_{n-1}/q_n, in lowest terms.
mpq_class alpha_minus(const ConvergentTable& table, std::size_t n);

/// A certified approximation of alpha by a convergent p_m/q_m.
struct HighPrecisionAlpha {
  mpz_class value;  ///< fixed-point mantissa, in [0, 2^frac_bits)
  unsigned frac_bits = 0;
  mpz_class error_ulps;  ///< |alpha - value 2^-F| <= error_ulps 2^-F
  std::size_t source_index = 0;  ///< m

  Certified as_certified() const { return {value, error_ulps, frac_bits}; }
  long double error_bound() const { return as_certified().error(); }

  /// Exact rational p/q (no truncation error beyond fixed-point rounding).
  static HighPrecisionAlpha from_rational(const mpq_class& r, unsigned frac_bits);
};

/// Fixed-point width used for a target error 2^-E: max(128, E + 16).
unsigned frac_bits_for(unsigned target_bits);

/// Chooses the minimal m with q_m q_{m+1} > 2^E and rounds p_m/q_m to
/// frac_bits_for(E) bits. Requires E >= 64.
HighPrecisionAlpha approx_alpha(const AlphaSpec& spec, unsigned target_bits);

/// Same, reading coefficients from a table; throws PrecisionError when the
/// table is too short to certify 2^-E.
HighPrecisionAlpha approx_alpha(const ConvergentTable& table, unsigned target_bits);

/// alpha_n^+ = [a_n; a_{n+1}, ...] with certified error < 2^-precision_bits.
Certified alpha_plus(const AlphaSpec& spec, std::size_t n, unsigned precision_bits);
Certified alpha_plus(const ConvergentTable& table, std::size_t n, unsigned precision_bits);

/// Head/tail data at index n.
struct TailHeadPair {
  std::size_t n = 0;
  mpq_class alpha_minus;         ///< exact q_{n-1}/q_n
  Certified alpha_plus;          ///< [a_n; a_{n+1}, ...]
  Certified c_n;                 ///< 1/(alpha_n^+ + alpha_n^-)
  Certified lambda_n;            ///< q_n alpha - p_n (signed)
  Certified c_n_from_lambda;     ///< q_n |lambda_n|
  int lambda_sign = 0;           ///< certified sign of lambda_n, (-1)^{n-1}

  long double lambda_abs() const { return std::abs(lambda_n.value()); }
};

/// Computes the pair with every certified error below 2^-precision_bits.
/// The table must extend far enough past n to certify alpha to the required
/// precision; otherwise PrecisionError.
TailHeadPair lambda_and_c(const ConvergentTable& table, std::size_t n, unsigned precision_bits);
TailHeadPair lambda_and_c(const AlphaSpec& spec, std::size_t n, unsigned precision_bits);

/// Regular continued fraction of a positive rational p/q < 1 as [0; c_1, ...,
/// c_k], returned as c_1..c_k in canonical form (last coefficient >= 2 when
/// k > 1). Zero returns an empty list.
std::vector<Coefficient> rational_cfc(const mpq_class& r);

/// Canonical form of a finite coefficient list: a trailing 1 (when the list
/// has more than one entry) is folded into its predecessor.
std::vector<Coefficient> canonical_cfc(std::vector<Coefficient> cfc);

}  // namespace sudler
