#include "sudler/certified.hpp"

#include <cmath>

#include "sudler/errors.hpp"

namespace sudler {
namespace {

long double to_long_double(const mpz_class& m, unsigned frac_bits) {
  // Keep the top 64 significant bits (exactly representable in a long
  // double), then scale.
  const mpz_class mag = abs(m);
  const auto bits = static_cast<long>(mpz_sizeinbase(mag.get_mpz_t(), 2));
  const long shift = bits > 64 ? bits - 64 : 0;
  const mpz_class top = mag >> static_cast<mp_bitcnt_t>(shift);
  const long double lead = static_cast<long double>(mpz_get_ui(top.get_mpz_t()));
  const long double v = std::ldexp(lead, static_cast<int>(shift) - static_cast<int>(frac_bits));
  return m < 0 ? -v : v;
}

mpz_class ceil_div(const mpz_class& num, const mpz_class& den) {
  mpz_class out;
  mpz_cdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

}  // namespace

Certified Certified::exact_integer(const mpz_class& v, unsigned frac_bits) {
  return {v << frac_bits, 0, frac_bits};
}

Certified Certified::from_rational(const mpq_class& r, unsigned frac_bits) {
  mpz_class num = r.get_num() << frac_bits;
  mpz_class m;
  mpz_fdiv_q(m.get_mpz_t(), num.get_mpz_t(), r.get_den().get_mpz_t());
  return {m, 1, frac_bits};
}

long double Certified::value() const { return to_long_double(mantissa, frac_bits); }

long double Certified::error() const {
  // One extra ulp of slack for the conversion itself.
  return to_long_double(error_ulps + 1, frac_bits);
}

mpq_class Certified::exact_value() const {
  mpq_class q(mantissa, mpz_class(1) << frac_bits);
  q.canonicalize();
  return q;
}

mpq_class Certified::error_bound() const {
  mpq_class q(error_ulps, mpz_class(1) << frac_bits);
  q.canonicalize();
  return q;
}

int Certified::certified_sign() const {
  if (mantissa > error_ulps) return 1;
  if (-mantissa > error_ulps) return -1;
  return 0;
}

Certified Certified::rescaled(unsigned bits) const {
  if (bits >= frac_bits) {
    const unsigned up = bits - frac_bits;
    return {mantissa << up, error_ulps << up, bits};
  }
  const unsigned down = frac_bits - bits;
  mpz_class m;
  mpz_fdiv_q_2exp(m.get_mpz_t(), mantissa.get_mpz_t(), down);
  mpz_class e;
  mpz_cdiv_q_2exp(e.get_mpz_t(), error_ulps.get_mpz_t(), down);
  return {m, e + 1, bits};
}

Certified operator+(const Certified& x, const Certified& y) {
  const unsigned bits = std::max(x.frac_bits, y.frac_bits);
  Certified a = x.rescaled(bits), b = y.rescaled(bits);
  return {a.mantissa + b.mantissa, a.error_ulps + b.error_ulps, bits};
}

Certified operator-(const Certified& x) { return {-x.mantissa, x.error_ulps, x.frac_bits}; }

Certified operator-(const Certified& x, const Certified& y) { return x + (-y); }

Certified operator*(const Certified& x, const mpz_class& k) {
  return {x.mantissa * k, x.error_ulps * abs(k), x.frac_bits};
}

Certified abs(const Certified& x) { return {abs(x.mantissa), x.error_ulps, x.frac_bits}; }

Certified reciprocal(const Certified& x) {
  const mpz_class low = x.mantissa - x.error_ulps;
  if (low <= 0) throw PrecisionError("reciprocal of an interval that is not certified positive");
  const unsigned f = x.frac_bits;
  mpz_class one = mpz_class(1) << (2 * f);
  mpz_class m;
  mpz_fdiv_q(m.get_mpz_t(), one.get_mpz_t(), x.mantissa.get_mpz_t());
  // |1/t - 1/v| <= e / (low * v) for t within e of v; plus one ulp of truncation.
  mpz_class err = ceil_div(x.error_ulps * one, low * x.mantissa) + 1;
  return {m, err, f};
}

bool intervals_overlap(const Certified& x, const Certified& y) {
  return x.lower() <= y.upper() && y.lower() <= x.upper();
}

}  // namespace sudler
