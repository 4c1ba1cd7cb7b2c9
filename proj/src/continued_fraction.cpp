#include "sudler/continued_fraction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sudler/errors.hpp"

namespace sudler {
namespace {

/// p_m, q_m, q_{m+1} of [0; c_1, c_2, ...] for the minimal m with
/// q_m q_{m+1} > 2^E, or m = 0 when the coefficients run out first.
struct Selection {
  std::size_t m = 0;
  mpz_class p, q, q_next;
};

template <class CoeffAt>
Selection select_convergent(CoeffAt&& coeff_at, std::size_t available, unsigned target_bits) {
  const mpz_class threshold = mpz_class(1) << target_bits;
  mpz_class p_prev = 1, p = 0, q_prev = 0, q = 1;  // index 0 and 1
  for (std::size_t m = 1; m <= available; ++m) {
    const mpz_class c = static_cast<long>(coeff_at(m));
    mpz_class p_next = c * p + p_prev;
    mpz_class q_next = c * q + q_prev;
    if (q * q_next > threshold) return {m, p, q, q_next};
    p_prev = std::move(p);
    p = std::move(p_next);
    q_prev = std::move(q);
    q = std::move(q_next);
  }
  return {};
}

Certified certify(const Selection& s, unsigned frac_bits) {
  Certified out = Certified::from_rational(mpq_class(s.p, s.q), frac_bits);
  mpz_class trunc;
  const mpz_class scale = mpz_class(1) << frac_bits;
  const mpz_class den = s.q * s.q_next;
  mpz_cdiv_q(trunc.get_mpz_t(), scale.get_mpz_t(), den.get_mpz_t());
  out.error_ulps += trunc;
  return out;
}

std::size_t bit_length(const mpz_class& v) { return mpz_sizeinbase(v.get_mpz_t(), 2); }

void require_index(const ConvergentTable& t, std::size_t n, const char* what) {
  if (n < 1 || n > t.size()) {
    throw RangeError(std::string(what) + ": index " + std::to_string(n) + " outside 1.." +
                     std::to_string(t.size()));
  }
}

}  // namespace

ConvergentTable::ConvergentTable(std::span<const Coefficient> cfc) {
  a_.reserve(cfc.size());
  for (Coefficient c : cfc) push_back(c);
}

void ConvergentTable::push_back(Coefficient next) {
  if (next < 1) throw RangeError("partial quotients must be >= 1");
  const mpz_class c = static_cast<long>(next);
  a_.push_back(next);
  const std::size_t n = a_.size();  // q_{n+1} = a_n q_n + q_{n-1}
  q_.push_back(c * q_[n] + q_[n - 1]);
  p_.push_back(c * p_[n] + p_[n - 1]);
}

Coefficient ConvergentTable::a(std::size_t n) const {
  if (n < 1 || n > a_.size()) throw RangeError("coefficient index " + std::to_string(n));
  return a_[n - 1];
}

const mpz_class& ConvergentTable::q(std::size_t n) const {
  if (n >= q_.size()) throw RangeError("denominator index " + std::to_string(n));
  return q_[n];
}

std::vector<mpz_class> ConvergentTable::denominators() const {
  return {q_.begin(), q_.end() - 1};
}

const mpz_class& ConvergentTable::p(std::size_t n) const {
  if (n >= p_.size()) throw RangeError("numerator index " + std::to_string(n));
  return p_[n];
}

ConvergentTable convergents(std::span<const Coefficient> cfc) {
  if (cfc.empty()) throw RangeError("convergents of an empty coefficient list");
  return ConvergentTable(cfc);
}

ConvergentTable convergents_until(const AlphaSpec& spec, const mpz_class& q_bound,
                                  std::size_t min_size) {
  ConvergentTable t;
  while (t.size() < min_size || t.q(t.size()) <= q_bound) {
    t.push_back(coefficient_at(spec, t.size() + 1));
  }
  return t;
}

mpq_class alpha_minus(const ConvergentTable& table, std::size_t n) {
  require_index(table, n, "alpha_minus");
  mpq_class r(table.q(n - 1), table.q(n));
  r.canonicalize();
  return r;
}

HighPrecisionAlpha HighPrecisionAlpha::from_rational(const mpq_class& r, unsigned frac_bits) {
  Certified c = Certified::from_rational(r, frac_bits);
  return {c.mantissa, frac_bits, c.error_ulps, 0};
}

unsigned frac_bits_for(unsigned target_bits) { return std::max(128u, target_bits + 16); }

HighPrecisionAlpha approx_alpha(const AlphaSpec& spec, unsigned target_bits) {
  if (target_bits < 64) throw PrecisionError("approx_alpha needs at least 64 target bits");
  CoefficientCache cache(spec);
  // Denominators grow at least like Fibonacci numbers, so 2E+8 terms always suffice.
  const std::size_t limit = 2 * static_cast<std::size_t>(target_bits) + 8;
  Selection s = select_convergent([&](std::size_t i) { return cache.at(i); }, limit, target_bits);
  const Certified c = certify(s, frac_bits_for(target_bits));
  return {c.mantissa, c.frac_bits, c.error_ulps, s.m};
}

HighPrecisionAlpha approx_alpha(const ConvergentTable& table, unsigned target_bits) {
  if (target_bits < 64) throw PrecisionError("approx_alpha needs at least 64 target bits");
  Selection s = select_convergent([&](std::size_t i) { return table.a(i); }, table.size(), target_bits);
  if (s.m == 0) {
    throw PrecisionError("convergent table with " + std::to_string(table.size()) +
                         " coefficients cannot certify 2^-" + std::to_string(target_bits));
  }
  const Certified c = certify(s, frac_bits_for(target_bits));
  return {c.mantissa, c.frac_bits, c.error_ulps, s.m};
}

Certified alpha_plus(const AlphaSpec& spec, std::size_t n, unsigned precision_bits) {
  if (n < 1) throw RangeError("alpha_plus: n must be >= 1");
  CoefficientCache cache(spec);
  const std::size_t limit = 2 * static_cast<std::size_t>(precision_bits) + 8;
  Selection s =
      select_convergent([&](std::size_t i) { return cache.at(n + i); }, limit, precision_bits + 1);
  const unsigned bits = frac_bits_for(precision_bits);
  return Certified::exact_integer(static_cast<long>(cache.at(n)), bits) + certify(s, bits);
}

Certified alpha_plus(const ConvergentTable& table, std::size_t n, unsigned precision_bits) {
  require_index(table, n, "alpha_plus");
  Selection s = select_convergent([&](std::size_t i) { return table.a(n + i); }, table.size() - n,
                                  precision_bits + 1);
  if (s.m == 0) {
    throw PrecisionError("convergent table too short to certify alpha_" + std::to_string(n) +
                         "^+ to 2^-" + std::to_string(precision_bits));
  }
  const unsigned bits = frac_bits_for(precision_bits);
  return Certified::exact_integer(static_cast<long>(table.a(n)), bits) + certify(s, bits);
}

TailHeadPair lambda_and_c(const ConvergentTable& table, std::size_t n, unsigned precision_bits) {
  require_index(table, n, "lambda_and_c");
  const unsigned bits = frac_bits_for(precision_bits);

  TailHeadPair out;
  out.n = n;
  out.alpha_minus = alpha_minus(table, n);
  out.alpha_plus = alpha_plus(table, n, precision_bits + 2);
  out.c_n = reciprocal(out.alpha_plus + Certified::from_rational(out.alpha_minus, bits));

  // q_n |Lambda_n| inherits q_n^2 times the error of alpha.
  const unsigned alpha_bits =
      std::max(64u, precision_bits + 2 * static_cast<unsigned>(bit_length(table.q(n))) + 2);
  const Certified alpha = approx_alpha(table, alpha_bits).as_certified();
  out.lambda_n = alpha * table.q(n) - Certified::exact_integer(table.p(n), alpha.frac_bits);
  out.lambda_sign = out.lambda_n.certified_sign();
  if (out.lambda_sign == 0) throw PrecisionError("sign of Lambda_n not certified");
  out.c_n_from_lambda = abs(out.lambda_n) * table.q(n);
  return out;
}

TailHeadPair lambda_and_c(const AlphaSpec& spec, std::size_t n, unsigned precision_bits) {
  // Depth: q_{m} q_{m+1} must pass 2^(precision + 2 log2 q_n + 2) beyond n.
  ConvergentTable t;
  while (t.size() < n) t.push_back(coefficient_at(spec, t.size() + 1));
  const unsigned need = std::max(64u, precision_bits + 2 * static_cast<unsigned>(
                                                           bit_length(t.q(n))) + 4);
  const mpz_class bound = mpz_class(1) << need;
  while (t.q(t.size()) * t.q(t.size()) <= bound || t.size() < n + 2) {
    t.push_back(coefficient_at(spec, t.size() + 1));
  }
  // Tail of alpha_n^+ needs its own depth relative to q_n.
  while (true) {
    try {
      return lambda_and_c(t, n, precision_bits);
    } catch (const PrecisionError&) {
      for (int k = 0; k < 8; ++k) t.push_back(coefficient_at(spec, t.size() + 1));
    }
  }
}

std::vector<Coefficient> rational_cfc(const mpq_class& r) {
  if (r < 0 || r >= 1) throw RangeError("rational_cfc expects a value in [0,1)");
  std::vector<Coefficient> out;
  mpz_class num = r.get_num(), den = r.get_den();
  while (num != 0) {
    mpz_class c = den / num;
    out.push_back(c.get_si());
    mpz_class rem = den - c * num;
    den = num;
    num = rem;
  }
  return out;
}

std::vector<Coefficient> canonical_cfc(std::vector<Coefficient> cfc) {
  if (cfc.size() > 1 && cfc.back() == 1) {
    cfc.pop_back();
    cfc.back() += 1;
  }
  return cfc;
}

}  // namespace sudler
