#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "sudler/alpha_spec.hpp"
#include "sudler/continued_fraction.hpp"
#include "sudler/ostrowski.hpp"

namespace sudler {

/// Largest N accepted by sudler_direct.
inline constexpr std::uint64_t kMaxDirectTerms = std::uint64_t{1} << 40;

/// Bits of certified precision used by default for alpha and Lambda_n.
inline constexpr unsigned kDefaultPrecisionBits = 160;

/// Throws PrecisionError unless err(alpha) * N * 2^20 < 2^-53, where err
/// includes the truncation of alpha to the 128-bit phase accumulator.
void require_direct_precision(const HighPrecisionAlpha& alpha, std::uint64_t terms);

/// log P_N(alpha) = sum_{r=1}^N log|2 sin(pi r alpha)|.
///
/// {r alpha} is advanced by exact 128-bit wraparound addition of the
/// certified alpha; each chunk seeds its phase as r_0 * alpha mod 1, so the
/// result does not depend on the thread count. Returns -inf if some r alpha
/// is an integer (rational alpha with N >= denominator).
long double sudler_direct(const HighPrecisionAlpha& alpha, std::uint64_t terms,
                          unsigned threads = 0);

struct SineProduct {
  long double log_abs = 0;       ///< log |prod_{r<q} 2 sin(pi r p / q)|
  int sign = 1;                  ///< sign of the product (it is +-q)
  long double relative_deviation = 0;  ///< ||prod| - q| / q
  long double value() const { return sign * std::exp(log_abs); }
};

/// prod_{r=1}^{q-1} 2 sin(pi r p / q) for gcd(p,q) = 1, 1 <= p < q. The
/// modulus equals q; the sign depends on p. Throws RangeError otherwise.
SineProduct sin_product_identity(std::int64_t p, std::int64_t q);

/// Truncation parameters at one index.
struct SudlerParams {
  std::size_t n = 0;
  std::uint64_t q_n = 0;
  std::uint64_t m_n = 0;      ///< floor((q_n - 1)/2)
  std::uint64_t tau_n = 0;    ///< floor(sqrt(q_n)) by default
  std::uint64_t kappa_n = 0;  ///< floor(sqrt(q_n)) by default
};

SudlerParams sudler_params(std::size_t n, std::uint64_t q_n);

/// Everything derived from (alpha, n) that the decomposition and the
/// estimators share.
struct IndexData {
  AlphaSpec spec;
  std::size_t n = 0;
  unsigned precision_bits = kDefaultPrecisionBits;
  ConvergentTable table;
  TailHeadPair pair;
  std::uint64_t q_n = 0;
  std::uint64_t q_prev = 0;  ///< q_{n-1}
  Coefficient a_n = 0;
  long double c_n = 0;
  long double lambda_abs = 0;

  SudlerParams params() const { return sudler_params(n, q_n); }
  /// Ostrowski base alpha_n^-.
  OstrowskiBase head_base() const { return OstrowskiBase::head_of(table, n); }
};

/// Throws RangeError for n < 1 and DeskBoundError when q_n > kMaxDirectTerms.
IndexData index_data(const AlphaSpec& spec, std::size_t n,
                     unsigned precision_bits = kDefaultPrecisionBits);

/// xi_nt = {t q_{n-1} / q_n} - 1/2, exact, for 0 <= t < q_n.
mpq_class xi_nt(const ConvergentTable& table, std::size_t n, std::int64_t t);

/// The pointwise sequences at (n, t), 0 <= t < q_n, in long double.
/// q_n and q_{n-1} are read off pair.alpha_minus = q_{n-1}/q_n.
long double xi_value(const TailHeadPair& pair, std::int64_t t);
long double s_nt(const TailHeadPair& pair, std::int64_t t);
long double h_nt(const TailHeadPair& pair, std::int64_t t);
long double beta_nt(const TailHeadPair& pair, std::int64_t t);

/// theta_n: 1 for odd q_n, 1 - beta_{n, q_n/2} for even q_n.
long double theta_n(const TailHeadPair& pair);

/// One evaluation of P_{q_n} together with its exact three-factor split.
struct SudlerPoint {
  std::size_t n = 0;
  std::uint64_t q_n = 0;
  long double log_P = 0;  ///< direct product
  long double A_n = 0;
  long double log_A_n = 0;
  long double log_B_n = 0;
  long double C_n = 0;
  long double log_C_n = 0;
  long double residual = 0;  ///< |log_P - (log A + log B + log C)|
  long double c_n = 0;
  long double lambda_abs = 0;

  long double P() const { return std::exp(log_P); }
};

/// Residual tolerance of the factorization identity.
inline constexpr long double kDecompositionTolerance = 1e-8L;

/// Computes log P_{q_n} directly and via A_n B_n C_n, where
///   A_n = |2 q_n sin(pi Lambda_n)|
///   B_n = |prod_{t=1}^{q_n-1} s_nt / (2 sin(pi t/q_n))|
///   C_n = prod_{t=1}^{q_n-1} (1 - s_n0^2 / s_nt^2)^(1/2).
SudlerPoint decompose(const IndexData& data, unsigned threads = 0);
SudlerPoint decompose(const AlphaSpec& spec, std::size_t n,
                      unsigned precision_bits = kDefaultPrecisionBits, unsigned threads = 0);

/// D_t(alpha_n^-) for t = 1..M_n - 1 from the Ostrowski closed form.
std::vector<long double> head_discrepancies(const IndexData& data);

/// Asymptotic log B_n: the D_t-weighted cosecant sum plus the truncated
/// (t, j) double sum, both cut at tau (default floor(sqrt(q_n))).
struct BnAsymptotic {
  long double log_value = 0;
  long double discrepancy_term = 0;  ///< -2 pi^2 c_n/q_n^2 sum D_t / (sin sin)
  long double double_sum = 0;        ///< sum_t sum_j (1/j)(c_n xi_nt / t)^j
  std::uint64_t tau = 0;
};
BnAsymptotic b_n_asymptotic(const IndexData& data, std::uint64_t tau = 0);

/// prod_{t=1}^{kappa} (1 - 1/u_n(t)^2), u_n(t) = 2 (t/c_n - xi_nt).
struct CnAsymptotic {
  long double value = 0;
  long double min_u = 0;  ///< min over t of u_n(t)
  std::uint64_t kappa = 0;
};
CnAsymptotic c_n_asymptotic(const IndexData& data, std::uint64_t kappa = 0);

struct EstimateReport {
  std::size_t n = 0;
  std::uint64_t q_n = 0;
  long double c_n = 0;
  long double S_n = 0;     ///< sum_{t=1}^{M_n-1} D_t(alpha_n^-) / (t(t+1))
  long double core = 0;    ///< c_n exp(-2 c_n S_n)
  long double log_P = 0;
  long double ratio = 0;   ///< P_{q_n} / core
  long double Y_n = 0;
  long double y_estimate = 0;  ///< (1/a_n) exp(Y_n / a_n)
  long double theorem_exponent = 0;  ///< -2 c_n S_n
  long double y_exponent = 0;        ///< c_n Y_n
};

/// Estimator c_n exp(-2 c_n S_n) against the measured log P_{q_n}.
EstimateReport estimate_theorem1(const IndexData& data, long double log_P);

struct YnResult {
  long double Y_n = 0;
  long double estimate = 0;  ///< (1/a_n) exp(Y_n / a_n)
  bool digits_valid = true;
};
YnResult y_n(const IndexData& data);

struct BnStarReport {
  long double log_B_star = 0;
  long double log_B_n = 0;
  long double difference = 0;  ///< |log B_n - log B_n^*|
  long double lambda_abs = 0;
  long double theta = 1;
  /// |log B_n - log B_n^*| <= (pi^2/2) |Lambda_n|
  bool within_bound = false;
};
BnStarReport bn_star(const IndexData& data, long double log_B_n, unsigned threads = 0);

}  // namespace sudler
