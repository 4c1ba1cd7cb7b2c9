#include "sudler/ostrowski.hpp"

#include <cmath>
#include <sstream>

#include "sudler/errors.hpp"

namespace sudler {
namespace {

using i128 = __int128;

constexpr std::int64_t kMaxDenominator = std::int64_t{1} << 52;

void require_t(std::int64_t t, const OstrowskiBase& base, std::int64_t lowest) {
  if (t < lowest || t >= base.validity_limit()) {
    throw RangeError("t = " + std::to_string(t) + " outside the Ostrowski range [" +
                     std::to_string(lowest) + ", " + std::to_string(base.validity_limit()) + ")");
  }
}

}  // namespace

OstrowskiBase::OstrowskiBase(std::vector<Coefficient> coeffs) : b_(std::move(coeffs)) {
  q_ = {0, 1};
  p_ = {1, 0};
  for (std::size_t i = 1; i <= b_.size(); ++i) {
    if (b_[i - 1] < 1) throw RangeError("Ostrowski base coefficients must be >= 1");
    const i128 qn = i128{b_[i - 1]} * q_[i] + q_[i - 1];
    const i128 pn = i128{b_[i - 1]} * p_[i] + p_[i - 1];
    if (qn > kMaxDenominator) throw RangeError("Ostrowski base denominator exceeds 2^52");
    q_.push_back(static_cast<std::int64_t>(qn));
    p_.push_back(static_cast<std::int64_t>(pn));
  }
  const std::int64_t big_q = q_.back(), big_p = p_.back();
  lambda_scaled_.resize(q_.size());
  for (std::size_t i = 0; i < q_.size(); ++i) {
    lambda_scaled_[i] = static_cast<std::int64_t>(i128{q_[i]} * big_p - i128{p_[i]} * big_q);
  }
}

OstrowskiBase OstrowskiBase::head_of(const ConvergentTable& table, std::size_t n) {
  if (n < 1 || n > table.size() + 1) throw RangeError("head_of: index out of range");
  std::vector<Coefficient> b;
  b.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) b.push_back(table.a(n - i));
  return OstrowskiBase(std::move(b));
}

mpq_class OstrowskiBase::beta() const {
  mpq_class r(static_cast<long>(p_.back()), static_cast<long>(q_.back()));
  r.canonicalize();
  return r;
}

mpq_class OstrowskiBase::lambda(std::size_t i) const {
  mpq_class r(static_cast<long>(lambda_scaled(i)), static_cast<long>(q_.back()));
  r.canonicalize();
  return r;
}

mpq_class OstrowskiBase::c(std::size_t i) const {
  mpq_class r(static_cast<long>(q(i)) * std::labs(lambda_scaled(i)), static_cast<long>(q_.back()));
  r.canonicalize();
  return r;
}

long double OstrowskiBase::c_value(std::size_t i) const {
  return static_cast<long double>(q(i)) * std::llabs(lambda_scaled(i)) /
         static_cast<long double>(q_.back());
}

std::size_t OstrowskiDigits::significant_length() const {
  std::size_t n = v.size();
  while (n > 0 && v[n - 1] == 0) --n;
  return n;
}

OstrowskiDigits ostrowski_encode(std::int64_t t, const OstrowskiBase& base) {
  require_t(t, base, 0);
  OstrowskiDigits d{t, std::vector<Coefficient>(base.length(), 0)};
  std::int64_t rest = t;
  for (std::size_t i = base.length(); i >= 1 && rest > 0; --i) {
    d.v[i - 1] = rest / base.q(i);
    rest -= d.v[i - 1] * base.q(i);
  }
  return d;
}

bool digits_valid(std::span<const Coefficient> v, const OstrowskiBase& base) {
  if (v.size() > base.length()) return false;
  for (std::size_t i = 1; i <= v.size(); ++i) {
    const Coefficient vi = v[i - 1];
    if (vi < 0 || vi > base.b(i)) return false;
    if (i == 1 && vi == base.b(1)) return false;
    if (i > 1 && vi == base.b(i) && v[i - 2] != 0) return false;
  }
  return true;
}

std::int64_t ostrowski_decode(std::span<const Coefficient> v, const OstrowskiBase& base) {
  if (!digits_valid(v, base)) throw RangeError("digit string violates the Ostrowski constraints");
  std::int64_t t = 0;
  for (std::size_t i = 1; i <= v.size(); ++i) t += v[i - 1] * base.q(i);
  return t;
}

std::string format_digits(const OstrowskiDigits& d) {
  const std::size_t n = d.significant_length();
  if (n == 0) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) os << ',';
    os << d.v[i];
  }
  return os.str();
}

namespace {

i128 scaled_from_digits(const OstrowskiDigits& d, const OstrowskiBase& base) {
  const i128 big_q = base.validity_limit();
  i128 total = 0;
  i128 lower = 0;  // sum_{i<j} v_i q_i
  for (std::size_t i = 1; i <= d.v.size(); ++i) {
    const i128 vi = d.v[i - 1];
    if (vi == 0) continue;
    const i128 lam = base.lambda_scaled(i);
    total += vi * lam * (vi * base.q(i) + 1);
    total += (i % 2 == 0 ? vi : -vi) * big_q;
    total += 2 * vi * lam * lower;
    lower += vi * base.q(i);
  }
  return total;
}

}  // namespace

std::int64_t d_t_formula_scaled(std::int64_t t, const OstrowskiBase& base) {
  require_t(t, base, 1);
  return static_cast<std::int64_t>(scaled_from_digits(ostrowski_encode(t, base), base));
}

mpq_class d_t_formula(std::int64_t t, const OstrowskiBase& base) {
  mpq_class r(static_cast<long>(d_t_formula_scaled(t, base)), 2 * static_cast<long>(base.validity_limit()));
  r.canonicalize();
  return r;
}

std::vector<std::int64_t> d_t_formula_scaled_range(std::int64_t t_max, const OstrowskiBase& base) {
  if (t_max < 1) return {};
  require_t(t_max, base, 1);
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(t_max));
  OstrowskiDigits d{0, std::vector<Coefficient>(base.length(), 0)};
  for (std::int64_t t = 1; t <= t_max; ++t) {
    std::int64_t rest = t;
    for (std::size_t i = base.length(); i >= 1; --i) {
      d.v[i - 1] = rest / base.q(i);
      rest -= d.v[i - 1] * base.q(i);
    }
    out.push_back(static_cast<std::int64_t>(scaled_from_digits(d, base)));
  }
  return out;
}

mpq_class d_t_bruteforce(std::int64_t t, const mpq_class& beta) {
  if (t < 1) throw RangeError("D_t needs t >= 1");
  // {beta s} = (P s mod Q) / Q
  const mpz_class& num = beta.get_num();
  const mpz_class& den = beta.get_den();
  mpz_class acc = 0, r;
  for (std::int64_t s = 1; s <= t; ++s) {
    mpz_class ps = num * s;
    mpz_fdiv_r(r.get_mpz_t(), ps.get_mpz_t(), den.get_mpz_t());
    acc += r;
  }
  mpq_class out(2 * acc - den * t, 2 * den);
  out.canonicalize();
  return out;
}

long double d_t_bruteforce(std::int64_t t, const HighPrecisionAlpha& beta) {
  if (t < 1) throw RangeError("D_t needs t >= 1");
  using u128 = unsigned __int128;
  const unsigned drop = beta.frac_bits - 128;
  const mpz_class top = beta.value >> drop;
  const mpz_class hi = top >> 64;
  const mpz_class lo = top - (hi << 64);
  const u128 step = (u128{mpz_get_ui(hi.get_mpz_t())} << 64) | u128{mpz_get_ui(lo.get_mpz_t())};
  u128 phase = 0;
  long double sum = 0, comp = 0;
  for (std::int64_t s = 1; s <= t; ++s) {
    phase += step;
    const long double term = std::ldexp(static_cast<long double>(phase), -128) - 0.5L;
    const long double y = term - comp;
    const long double next = sum + y;
    comp = (next - sum) - y;
    sum = next;
  }
  return sum;
}

LogBoundReport d_t_logbound_check(const OstrowskiBase& base, std::int64_t t_max) {
  require_t(t_max, base, 1);
  LogBoundReport rep;
  rep.t_max = t_max;
  const long double big_q2 = 2.0L * static_cast<long double>(base.validity_limit());
  std::vector<std::int64_t> coeff_prefix(base.length() + 1, 0);
  for (std::size_t i = 1; i <= base.length(); ++i) coeff_prefix[i] = coeff_prefix[i - 1] + base.b(i);

  for (std::int64_t t = 1; t <= t_max; ++t) {
    const OstrowskiDigits d = ostrowski_encode(t, base);
    const i128 scaled = scaled_from_digits(d, base);
    const i128 mag = scaled < 0 ? -scaled : scaled;
    const std::size_t nt = d.significant_length();
    std::int64_t digit_sum = 0;
    for (auto v : d.v) digit_sum += v;
    // |D_t| <= 3/2 S  <=>  |2Q D_t| <= 3 Q S
    const i128 big_q = base.validity_limit();
    if (mag > 3 * big_q * coeff_prefix[nt]) rep.coefficient_bound_holds = false;
    if (mag > 3 * big_q * digit_sum) rep.digit_bound_holds = false;
    const long double abs_dt = static_cast<long double>(mag) / big_q2;
    if (abs_dt > rep.max_abs_dt) {
      rep.max_abs_dt = abs_dt;
      rep.argmax_abs_dt = t;
    }
    const long double lg = std::log(static_cast<long double>(t) + 1);
    rep.max_ratio_to_log = std::max(rep.max_ratio_to_log, abs_dt / lg);
    rep.max_digit_count = std::max(rep.max_digit_count, nt);
    if (t >= 2) rep.max_digits_per_log = std::max(rep.max_digits_per_log, nt / lg);
  }
  return rep;
}

}  // namespace sudler
