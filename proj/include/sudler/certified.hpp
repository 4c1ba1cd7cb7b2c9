#pragma once

#include <gmpxx.h>

namespace sudler {

/// A real number stored in binary fixed point: value = mantissa * 2^-frac_bits,
/// with the guarantee |true value - value| <= error_ulps * 2^-frac_bits.
struct Certified {
  mpz_class mantissa;
  mpz_class error_ulps;
  unsigned frac_bits = 0;

  static Certified exact_integer(const mpz_class& v, unsigned frac_bits);
  /// Nearest fixed-point value to num/den; error 1 ulp.
  static Certified from_rational(const mpq_class& r, unsigned frac_bits);

  long double value() const;
  /// Upper bound on the absolute error, rounded up.
  long double error() const;
  mpq_class exact_value() const;
  mpq_class error_bound() const;
  mpq_class lower() const { return exact_value() - error_bound(); }
  mpq_class upper() const { return exact_value() + error_bound(); }

  /// Sign of the true value: +1/-1 if certified, 0 if the interval straddles 0.
  int certified_sign() const;

  /// Same number at a different scale. Narrowing floors the mantissa and
  /// adds one ulp of error.
  Certified rescaled(unsigned bits) const;
};

Certified operator+(const Certified& x, const Certified& y);
Certified operator-(const Certified& x, const Certified& y);
Certified operator-(const Certified& x);
Certified operator*(const Certified& x, const mpz_class& k);
Certified abs(const Certified& x);
/// 1/x. Requires the certified interval of x to lie strictly above 0.
Certified reciprocal(const Certified& x);

/// True when the certified intervals of x and y overlap.
bool intervals_overlap(const Certified& x, const Certified& y);

}  // namespace sudler
