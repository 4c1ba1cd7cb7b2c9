#include "sudler/sudler.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sudler/errors.hpp"
#include "sudler/parallel.hpp"

namespace sudler {
namespace {

using u128 = unsigned __int128;

constexpr long double kPi = std::numbers::pi_v<long double>;

std::size_t bit_length(std::uint64_t v) { return v == 0 ? 0 : 64 - static_cast<std::size_t>(__builtin_clzll(v)); }

u128 top_128_bits(const HighPrecisionAlpha& alpha) {
  if (alpha.frac_bits < 128) throw PrecisionError("phase accumulation needs >= 128 fractional bits");
  const mpz_class top = alpha.value >> (alpha.frac_bits - 128);
  const mpz_class hi = top >> 64;
  const mpz_class lo = top - (hi << 64);
  return (u128{mpz_get_ui(hi.get_mpz_t())} << 64) | u128{mpz_get_ui(lo.get_mpz_t())};
}

/// log(1 + x), switching to log|1 + x| away from the log1p-friendly range.
long double log_one_plus(long double x) {
  return x > -0.5L ? std::log1p(x) : std::log(std::fabs(1 + x));
}

/// Shared pointwise quantities for index n, in long double.
struct Kernel {
  std::int64_t q = 1;
  std::int64_t q_prev = 0;
  long double lambda_abs = 0;

  explicit Kernel(const TailHeadPair& pair)
      : q(pair.alpha_minus.get_den().get_si()),
        q_prev(pair.alpha_minus.get_num().get_si()),
        lambda_abs(pair.lambda_abs()) {}
  Kernel(std::int64_t q_, std::int64_t q_prev_, long double lam) : q(q_), q_prev(q_prev_), lambda_abs(lam) {}

  long double xi(std::int64_t t) const {
    const auto r = static_cast<std::int64_t>((static_cast<__int128>(t) * q_prev) % q);
    return static_cast<long double>(r) / q - 0.5L;
  }
  /// 2 sin(pi [t/q - |Lambda| xi]), evaluated through sin(pi - x) = sin(x)
  /// for t > q/2 so the argument stays accurate.
  long double s(std::int64_t t) const {
    const long double delta = lambda_abs * xi(t);
    if (2 * t <= q) return 2 * std::sin(kPi * (static_cast<long double>(t) / q - delta));
    return 2 * std::sin(kPi * (static_cast<long double>(q - t) / q + delta));
  }
  /// cot(pi t / q) for 0 < t < q.
  long double cot(std::int64_t t) const {
    if (2 * t == q) return 0;
    if (2 * t < q) {
      const long double x = kPi * t / q;
      return std::cos(x) / std::sin(x);
    }
    const long double x = kPi * (q - t) / q;
    return -std::cos(x) / std::sin(x);
  }
  long double h(std::int64_t t) const { return cot(t) * std::sin(kPi * lambda_abs * xi(t)); }
  long double beta(std::int64_t t) const {
    const long double half = std::sin(kPi * lambda_abs * xi(t) / 2);
    return 2 * half * half;
  }
};

void require_t(std::int64_t t, std::int64_t q) {
  if (t < 0 || t >= q) {
    throw RangeError("t = " + std::to_string(t) + " outside [0, q_n = " + std::to_string(q) + ")");
  }
}

}  // namespace

void require_direct_precision(const HighPrecisionAlpha& alpha, std::uint64_t terms) {
  if (terms > kMaxDirectTerms) throw PrecisionError("sudler_direct: N exceeds 2^40");
  if (alpha.frac_bits < 128) throw PrecisionError("sudler_direct: alpha needs >= 128 fractional bits");
  // (error_ulps + 2^(F-128)) * N * 2^73 < 2^F
  const mpz_class per_step = alpha.error_ulps + (mpz_class(1) << (alpha.frac_bits - 128));
  const mpz_class lhs = per_step * mpz_class(static_cast<unsigned long>(terms)) << 73;
  if (lhs >= (mpz_class(1) << alpha.frac_bits)) {
    throw PrecisionError("sudler_direct: certified precision of alpha is insufficient for N = " +
                         std::to_string(terms));
  }
}

long double sudler_direct(const HighPrecisionAlpha& alpha, std::uint64_t terms, unsigned threads) {
  require_direct_precision(alpha, terms);
  const u128 step = top_128_bits(alpha);
  std::atomic<bool> hit_integer{false};
  const CompensatedSum total = chunked_reduce<CompensatedSum>(
      1, terms + 1, threads, [step, &hit_integer](std::uint64_t begin, std::uint64_t end) {
        CompensatedSum acc;
        u128 phase = step * u128{begin};
        for (std::uint64_t r = begin; r < end; ++r, phase += step) {
          const u128 dist = std::min(phase, u128{0} - phase);
          if (dist == 0) {
            hit_integer = true;
            continue;
          }
          const long double x = std::ldexp(static_cast<long double>(dist), -128);
          acc.add(std::log(2 * std::sin(kPi * x)));
        }
        return acc;
      });
  if (hit_integer) return -std::numeric_limits<long double>::infinity();
  return total.value();
}

SineProduct sin_product_identity(std::int64_t p, std::int64_t q) {
  if (q < 1 || p < 1 || p >= q || std::gcd(p, q) != 1) {
    throw RangeError("sin_product_identity needs 1 <= p < q with gcd(p, q) = 1");
  }
  CompensatedSum acc;
  int negatives = 0;
  for (std::int64_t r = 1; r < q; ++r) {
    const __int128 rp = static_cast<__int128>(r) * p;
    const auto turns = static_cast<std::int64_t>(rp / q);
    const auto rem = static_cast<std::int64_t>(rp % q);
    if (turns % 2 == 1) ++negatives;
    const std::int64_t near = std::min(rem, q - rem);
    acc.add(std::log(2 * std::sin(kPi * static_cast<long double>(near) / q)));
  }
  SineProduct out;
  out.log_abs = acc.value();
  out.sign = negatives % 2 == 0 ? 1 : -1;
  out.relative_deviation = std::fabs(std::expm1(out.log_abs - std::log(static_cast<long double>(q))));
  return out;
}

SudlerParams sudler_params(std::size_t n, std::uint64_t q_n) {
  SudlerParams p;
  p.n = n;
  p.q_n = q_n;
  p.m_n = q_n >= 1 ? (q_n - 1) / 2 : 0;
  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(q_n)));
  while (root * root > q_n) --root;
  while ((root + 1) * (root + 1) <= q_n) ++root;
  p.tau_n = root;
  p.kappa_n = root;
  return p;
}

IndexData index_data(const AlphaSpec& spec, std::size_t n, unsigned precision_bits) {
  if (n < 1) throw RangeError("index n must be >= 1");
  IndexData d;
  d.spec = spec;
  d.n = n;
  d.precision_bits = precision_bits;
  d.table = convergents_until(spec, 0, n + 1);
  if (d.table.q(n) > mpz_class(static_cast<unsigned long>(kMaxDirectTerms))) {
    throw DeskBoundError("q_" + std::to_string(n) + " exceeds 2^40");
  }
  d.pair = lambda_and_c(spec, n, precision_bits);
  d.q_n = d.table.q(n).get_ui();
  d.q_prev = d.table.q(n - 1).get_ui();
  d.a_n = d.table.a(n);
  d.c_n = d.pair.c_n.value();
  d.lambda_abs = d.pair.lambda_abs();
  return d;
}

mpq_class xi_nt(const ConvergentTable& table, std::size_t n, std::int64_t t) {
  const mpz_class& q = table.q(n);
  if (t < 0 || mpz_class(static_cast<long>(t)) >= q) {
    throw RangeError("xi_nt: t outside [0, q_n)");
  }
  mpz_class r;
  const mpz_class prod = table.q(n - 1) * t;
  mpz_fdiv_r(r.get_mpz_t(), prod.get_mpz_t(), q.get_mpz_t());
  mpq_class out(r, q);
  out.canonicalize();
  return out - mpq_class(1, 2);
}

long double xi_value(const TailHeadPair& pair, std::int64_t t) {
  const Kernel k(pair);
  require_t(t, k.q);
  return k.xi(t);
}

long double s_nt(const TailHeadPair& pair, std::int64_t t) {
  const Kernel k(pair);
  require_t(t, k.q);
  return k.s(t);
}

long double h_nt(const TailHeadPair& pair, std::int64_t t) {
  const Kernel k(pair);
  require_t(t, k.q);
  if (t == 0) throw RangeError("h_nt is undefined at t = 0");
  return k.h(t);
}

long double beta_nt(const TailHeadPair& pair, std::int64_t t) {
  const Kernel k(pair);
  require_t(t, k.q);
  return k.beta(t);
}

long double theta_n(const TailHeadPair& pair) {
  const Kernel k(pair);
  if (k.q % 2 == 1) return 1;
  return 1 - k.beta(k.q / 2);
}

namespace {

struct DecompositionSums {
  CompensatedSum log_b, log_c;
  void merge(const DecompositionSums& o) {
    log_b.merge(o.log_b);
    log_c.merge(o.log_c);
  }
};

}  // namespace

SudlerPoint decompose(const IndexData& data, unsigned threads) {
  const auto q = static_cast<std::int64_t>(data.q_n);
  const Kernel k(q, static_cast<std::int64_t>(data.q_prev), data.lambda_abs);

  SudlerPoint pt;
  pt.n = data.n;
  pt.q_n = data.q_n;
  pt.c_n = data.c_n;
  pt.lambda_abs = data.lambda_abs;

  const unsigned direct_bits =
      std::max(data.precision_bits, 80u + static_cast<unsigned>(bit_length(data.q_n)));
  pt.log_P = sudler_direct(approx_alpha(data.spec, direct_bits), data.q_n, threads);

  pt.A_n = 2 * static_cast<long double>(q) * std::sin(kPi * data.lambda_abs);
  pt.log_A_n = std::log(pt.A_n);

  const long double s0 = k.s(0);
  const DecompositionSums sums = chunked_reduce<DecompositionSums>(
      1, static_cast<std::uint64_t>(q), threads, [&](std::uint64_t begin, std::uint64_t end) {
        DecompositionSums acc;
        for (auto t = static_cast<std::int64_t>(begin); t < static_cast<std::int64_t>(end); ++t) {
          // s_nt / (2 sin(pi t/q)) = 1 - beta_nt - h_nt
          acc.log_b.add(log_one_plus(-k.beta(t) - k.h(t)));
          const long double ratio = s0 / k.s(t);
          acc.log_c.add(0.5L * log_one_plus(-ratio * ratio));
        }
        return acc;
      });
  pt.log_B_n = sums.log_b.value();
  pt.log_C_n = sums.log_c.value();
  pt.C_n = std::exp(pt.log_C_n);
  pt.residual = std::fabs(pt.log_P - (pt.log_A_n + pt.log_B_n + pt.log_C_n));
  return pt;
}

SudlerPoint decompose(const AlphaSpec& spec, std::size_t n, unsigned precision_bits, unsigned threads) {
  return decompose(index_data(spec, n, precision_bits), threads);
}

std::vector<long double> head_discrepancies(const IndexData& data) {
  const SudlerParams prm = data.params();
  if (prm.m_n < 2) return {};
  const OstrowskiBase base = data.head_base();
  const auto scaled = d_t_formula_scaled_range(static_cast<std::int64_t>(prm.m_n - 1), base);
  const long double denom = 2.0L * static_cast<long double>(base.validity_limit());
  std::vector<long double> out(scaled.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) out[i] = static_cast<long double>(scaled[i]) / denom;
  return out;
}

namespace {

void require_q_at_least(const IndexData& data, std::uint64_t bound, const char* what) {
  if (data.q_n < bound) {
    throw RangeError(std::string(what) + " needs q_n >= " + std::to_string(bound) + " (q_" +
                     std::to_string(data.n) + " = " + std::to_string(data.q_n) + ")");
  }
}

}  // namespace

BnAsymptotic b_n_asymptotic(const IndexData& data, std::uint64_t tau) {
  require_q_at_least(data, 9, "b_n_asymptotic");
  const SudlerParams prm = data.params();
  if (tau == 0) tau = prm.tau_n;
  const auto q = static_cast<long double>(data.q_n);
  const Kernel k(static_cast<std::int64_t>(data.q_n), static_cast<std::int64_t>(data.q_prev),
                 data.lambda_abs);

  const std::vector<long double> dt = head_discrepancies(data);
  CompensatedSum cosec;
  for (std::size_t i = 0; i < dt.size(); ++i) {
    const auto t = static_cast<long double>(i + 1);
    cosec.add(dt[i] / (std::sin(kPi * t / q) * std::sin(kPi * (t + 1) / q)));
  }

  CompensatedSum dbl;
  for (std::uint64_t t = 1; t <= tau; ++t) {
    const long double x = data.c_n * k.xi(static_cast<std::int64_t>(t)) / static_cast<long double>(t);
    long double power = x;
    for (std::uint64_t j = 2; j <= tau; ++j) {
      power *= x;
      if (power == 0) break;
      dbl.add(power / static_cast<long double>(j));
    }
  }

  BnAsymptotic out;
  out.tau = tau;
  out.discrepancy_term = -2 * kPi * kPi * data.c_n / (q * q) * cosec.value();
  out.double_sum = dbl.value();
  out.log_value = out.discrepancy_term - 2 * out.double_sum;
  return out;
}

CnAsymptotic c_n_asymptotic(const IndexData& data, std::uint64_t kappa) {
  require_q_at_least(data, 9, "c_n_asymptotic");
  if (kappa == 0) kappa = data.params().kappa_n;
  const Kernel k(static_cast<std::int64_t>(data.q_n), static_cast<std::int64_t>(data.q_prev),
                 data.lambda_abs);
  CompensatedSum log_prod;
  long double min_u = std::numeric_limits<long double>::infinity();
  for (std::uint64_t t = 1; t <= kappa; ++t) {
    const long double u = 2 * (static_cast<long double>(t) / data.c_n - k.xi(static_cast<std::int64_t>(t)));
    min_u = std::min(min_u, u);
    log_prod.add(std::log1p(-1 / (u * u)));
  }
  return {std::exp(log_prod.value()), min_u, kappa};
}

YnResult y_n(const IndexData& data) {
  require_q_at_least(data, 9, "y_n");
  const SudlerParams prm = data.params();
  const OstrowskiBase base = data.head_base();
  std::vector<long double> c(base.length() + 1);
  for (std::size_t j = 1; j <= base.length(); ++j) c[j] = base.c_value(j);

  YnResult out;
  CompensatedSum total;
  for (std::uint64_t t = 1; t + 1 <= prm.m_n; ++t) {
    const OstrowskiDigits d = ostrowski_encode(static_cast<std::int64_t>(t), base);
    if (!digits_valid(d.v, base)) out.digits_valid = false;
    long double inner = 0;
    for (std::size_t j = 1; j <= d.v.size(); ++j) {
      const auto v = static_cast<long double>(d.v[j - 1]);
      if (v == 0) continue;
      const long double term = v * (1 - v * c[j]);
      inner += (j % 2 == 1) ? term : -term;
    }
    const auto tt = static_cast<long double>(t);
    total.add(inner / (tt * (tt + 1)));
  }
  out.Y_n = total.value();
  const auto a = static_cast<long double>(data.a_n);
  out.estimate = std::exp(out.Y_n / a) / a;
  return out;
}

EstimateReport estimate_theorem1(const IndexData& data, long double log_P) {
  require_q_at_least(data, 9, "estimate_theorem1");
  EstimateReport r;
  r.n = data.n;
  r.q_n = data.q_n;
  r.c_n = data.c_n;
  r.log_P = log_P;

  const std::vector<long double> dt = head_discrepancies(data);
  CompensatedSum s;
  for (std::size_t i = 0; i < dt.size(); ++i) {
    const auto t = static_cast<long double>(i + 1);
    s.add(dt[i] / (t * (t + 1)));
  }
  r.S_n = s.value();
  r.theorem_exponent = -2 * r.c_n * r.S_n;
  r.core = r.c_n * std::exp(r.theorem_exponent);
  r.ratio = std::exp(log_P) / r.core;

  const YnResult y = y_n(data);
  r.Y_n = y.Y_n;
  r.y_estimate = y.estimate;
  r.y_exponent = r.c_n * r.Y_n;
  return r;
}

BnStarReport bn_star(const IndexData& data, long double log_B_n, unsigned threads) {
  require_q_at_least(data, 3, "bn_star");
  const Kernel k(static_cast<std::int64_t>(data.q_n), static_cast<std::int64_t>(data.q_prev),
                 data.lambda_abs);
  const CompensatedSum star = chunked_reduce<CompensatedSum>(
      1, data.q_n, threads, [&](std::uint64_t begin, std::uint64_t end) {
        CompensatedSum acc;
        for (std::uint64_t t = begin; t < end; ++t) acc.add(log_one_plus(-k.h(static_cast<std::int64_t>(t))));
        return acc;
      });
  BnStarReport r;
  r.log_B_star = star.value();
  r.log_B_n = log_B_n;
  r.difference = std::fabs(log_B_n - r.log_B_star);
  r.lambda_abs = data.lambda_abs;
  r.theta = theta_n(data.pair);
  r.within_bound = r.difference <= kPi * kPi / 2 * data.lambda_abs;
  return r;
}

}  // namespace sudler
