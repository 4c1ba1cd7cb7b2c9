#include <doctest.h>

#include <cmath>

#include "sudler/alpha_spec.hpp"
#include "sudler/certified.hpp"
#include "sudler/continued_fraction.hpp"
#include "sudler/errors.hpp"

using namespace sudler;

namespace {

std::vector<long> as_longs(const std::vector<mpz_class>& v) {
  std::vector<long> out;
  for (const auto& x : v) out.push_back(x.get_si());
  return out;
}

const std::vector<AlphaSpec>& all_kinds() {
  static const std::vector<AlphaSpec> specs{
      spec::Periodic{{}, {1}},  spec::Periodic{{}, {1, 1, 2}}, spec::Periodic{{3}, {2}}, spec::Euler{},
      spec::TwosRule{2},        spec::ThueMorse{1, 2},         spec::Explicit{{5, 1, 7}, 3}};
  return specs;
}

}  // namespace

TEST_CASE("expand_cfc examples") {
  CHECK(expand_cfc(spec::Periodic{{}, {1}}, 6) == std::vector<Coefficient>{1, 1, 1, 1, 1, 1});
  CHECK(expand_cfc(spec::Euler{}, 9) == std::vector<Coefficient>{1, 2, 1, 1, 4, 1, 1, 6, 1});
  CHECK(expand_cfc(spec::TwosRule{2}, 10) == std::vector<Coefficient>{1, 2, 1, 1, 2, 1, 1, 1, 2, 1});
  // Thue-Morse word 0110 1001 over {1, 2}.
  CHECK(expand_cfc(spec::ThueMorse{1, 2}, 8) == std::vector<Coefficient>{1, 2, 2, 1, 2, 1, 1, 2});
  CHECK(expand_cfc(spec::Explicit{{5, 1, 7}, 3}, 5) == std::vector<Coefficient>{5, 1, 7, 3, 3});
  CHECK(expand_cfc(spec::Periodic{{3}, {2, 1}}, 5) == std::vector<Coefficient>{3, 2, 1, 2, 1});
}

TEST_CASE("expand_cfc prefix stability and positivity") {
  for (const AlphaSpec& s : all_kinds()) {
    const auto longer = expand_cfc(s, 200);
    for (std::size_t k : {1u, 7u, 50u, 199u}) {
      const auto shorter = expand_cfc(s, k);
      CHECK(std::equal(shorter.begin(), shorter.end(), longer.begin()));
    }
    for (Coefficient a : longer) CHECK(a >= 1);
    CoefficientCache cache(s);
    CHECK(cache.prefix(30) == expand_cfc(s, 30));
    CHECK(cache.at(120) == longer[119]);
  }
}

TEST_CASE("alpha spec DSL round trip") {
  for (const char* text : {"golden", "e", "quad:|1,1,2", "quad:3|2", "twos:2", "tm:1,2", "explicit:5,1,7;fill=3"}) {
    const AlphaSpec s = parse_alpha_spec(text);
    CHECK(to_string(s) == text);
    CHECK(parse_alpha_spec(to_string(s)) == s);
  }
  CHECK(parse_alpha_spec("golden") == AlphaSpec{spec::Periodic{{}, {1}}});
  CHECK(parse_alpha_spec("e") == AlphaSpec{spec::Euler{}});
  for (const char* bad : {"", "pi", "quad:", "quad:1|", "twos:0", "tm:1", "explicit:;fill=1", "quad:|0", "twos:x"}) {
    CHECK_THROWS_AS(parse_alpha_spec(bad), ParseError);
  }
  CHECK_FALSE(has_bounded_coefficients(spec::Euler{}));
  CHECK(has_bounded_coefficients(spec::TwosRule{1}));
}

TEST_CASE("convergents examples") {
  const ConvergentTable golden = convergents(expand_cfc(spec::Periodic{{}, {1}}, 7));
  CHECK(as_longs(golden.denominators()) == std::vector<long>{0, 1, 1, 2, 3, 5, 8, 13});
  const ConvergentTable e = convergents(expand_cfc(spec::Euler{}, 6));
  CHECK(as_longs(e.denominators()) == std::vector<long>{0, 1, 1, 3, 4, 7, 32});
  CHECK(golden.p(1) * golden.q(2) - golden.p(2) * golden.q(1) == -1);
  CHECK_THROWS(convergents(std::vector<Coefficient>{}));
}

TEST_CASE("denominator oracles") {
  const ConvergentTable e = convergents_until(spec::Euler{}, 0, 21);
  CHECK(e.q(15) == 190435);
  CHECK(e.q(16) == 208524);
  CHECK(e.q(18) == 4996032);
  CHECK(e.q(19) == 5394991);
  CHECK(e.q(20) == 10391023);
  const ConvergentTable twos = convergents_until(spec::TwosRule{2}, 0, 31);
  CHECK(twos.q(29) == 4330593);
  CHECK(twos.q(30) == 7463968);
  CHECK(twos.q(31) == 11794561);
  const ConvergentTable quad = convergents_until(spec::Periodic{{}, {1, 1, 2}}, 0, 28);
  CHECK(quad.q(19) == 44695);
  CHECK(quad.q(27) == 4052018);
  CHECK(quad.q(28) == 10458821);
}

TEST_CASE("determinant identity and monotone denominators") {
  for (const AlphaSpec& s : all_kinds()) {
    const ConvergentTable t = convergents(expand_cfc(s, 60));
    for (std::size_t n = 0; n <= 60; ++n) {
      const mpz_class det = t.p(n) * t.q(n + 1) - t.p(n + 1) * t.q(n);
      CHECK(det == (n % 2 == 0 ? 1 : -1));
      if (n >= 2) CHECK(t.q(n + 1) > t.q(n));
    }
  }
}

TEST_CASE("alpha_minus") {
  const ConvergentTable g = convergents(expand_cfc(spec::Periodic{{}, {1}}, 8));
  CHECK(alpha_minus(g, 5) == mpq_class(3, 5));
  CHECK(alpha_minus(g, 1) == 0);
  const ConvergentTable e = convergents(expand_cfc(spec::Euler{}, 8));
  CHECK(alpha_minus(e, 6) == mpq_class(7, 32));
  CHECK_THROWS(alpha_minus(e, 0));
  CHECK_THROWS(alpha_minus(e, 50));
}

TEST_CASE("alpha_minus re-expands to the reversed prefix") {
  for (const AlphaSpec& s : all_kinds()) {
    const ConvergentTable t = convergents(expand_cfc(s, 40));
    for (std::size_t n = 2; n <= 40; ++n) {
      std::vector<Coefficient> reversed;
      for (std::size_t i = n - 1; i >= 1; --i) reversed.push_back(t.a(i));
      const mpq_class am = alpha_minus(t, n);
      if (am == 1) {
        CHECK(canonical_cfc(reversed) == std::vector<Coefficient>{1});  // q_{n-1} = q_n
      } else {
        CHECK(rational_cfc(am) == canonical_cfc(reversed));
      }
    }
  }
  CHECK(canonical_cfc({2, 1}) == std::vector<Coefficient>{3});
  CHECK(canonical_cfc({1}) == std::vector<Coefficient>{1});
  CHECK(rational_cfc(mpq_class(3, 5)) == std::vector<Coefficient>{1, 1, 2});
}

TEST_CASE("approx_alpha") {
  const HighPrecisionAlpha a64 = approx_alpha(spec::Periodic{{}, {1}}, 64);
  CHECK(a64.source_index == 48);  // q_48 = 4807526976, minimal with q_m q_{m+1} > 2^64
  CHECK(a64.frac_bits == 128);
  const HighPrecisionAlpha a128 = approx_alpha(spec::Periodic{{}, {1}}, 128);
  CHECK(a128.source_index == 94);
  CHECK(a128.frac_bits == 144);
  CHECK(a128.error_bound() <= a64.error_bound());
  CHECK(a64.error_bound() < std::ldexp(1.0L, -63));
  const long double phi = (std::sqrt(5.0L) - 1) / 2;
  CHECK(std::fabs(a64.as_certified().value() - phi) < 1e-18L);
  CHECK(a64.value >= 0);
  CHECK(a64.value < (mpz_class(1) << a64.frac_bits));
  CHECK_THROWS(approx_alpha(spec::Euler{}, 32));
  CHECK_THROWS_AS(approx_alpha(convergents(expand_cfc(spec::Euler{}, 5)), 64), PrecisionError);
}

TEST_CASE("alpha_plus") {
  const long double golden = (1 + std::sqrt(5.0L)) / 2;
  for (std::size_t n : {1u, 2u, 10u, 40u}) {
    const Certified v = alpha_plus(spec::Periodic{{}, {1}}, n, 100);
    CHECK(std::fabs(v.value() - golden) < 1e-18L);
    CHECK(v.error_bound() < mpq_class(1, mpz_class(1) << 100));
    CHECK(v.lower() > 1);
    CHECK(v.upper() < 2);
  }
  const Certified silver = alpha_plus(spec::Periodic{{}, {2}}, 3, 100);
  CHECK(std::fabs(silver.value() - (1 + std::sqrt(2.0L))) < 1e-18L);
  const Certified e5 = alpha_plus(spec::Euler{}, 5, 100);  // a_5 = 4
  CHECK(e5.lower() > 4);
  CHECK(e5.upper() < 5);
}

TEST_CASE("lambda_and_c") {
  const TailHeadPair p40 = lambda_and_c(spec::Periodic{{}, {1}}, 40, 120);
  CHECK(std::fabs(p40.c_n.value() - 0.4472135954999579L) < 1e-15L);
  CHECK(intervals_overlap(p40.c_n, p40.c_n_from_lambda));
  const TailHeadPair p2 = lambda_and_c(spec::Periodic{{}, {1}}, 2, 120);
  CHECK(std::fabs(p2.lambda_abs() - 0.3819660112501051L) < 1e-15L);
  CHECK(p2.lambda_sign == -1);
  CHECK(abs(p2.lambda_n).lower() >= mpq_class(1, 4));
  CHECK(abs(p2.lambda_n).upper() <= mpq_class(1, 2));
  CHECK(lambda_and_c(spec::Periodic{{}, {1}}, 1, 120).lambda_sign == 1);

  for (const AlphaSpec& s : all_kinds()) {
    const ConvergentTable t = convergents_until(s, 0, 45);
    for (std::size_t n = 1; n <= 40; ++n) {
      const TailHeadPair p = lambda_and_c(s, n, 128);
      CHECK(p.alpha_minus == alpha_minus(t, n));
      CHECK(p.lambda_sign == (n % 2 == 1 ? 1 : -1));
      const mpq_class lo = abs(p.lambda_n).lower(), hi = abs(p.lambda_n).upper();
      CHECK(lo >= mpq_class(1) / (2 * t.q(n + 1)));
      CHECK(hi <= mpq_class(1) / t.q(n + 1));
      // c_n computed two ways agrees within twice the certified error.
      const Certified gap = p.c_n_from_lambda - p.c_n;
      CHECK(abs(gap.exact_value()) <= 2 * (p.c_n.error_bound() + p.c_n_from_lambda.error_bound()) + gap.error_bound());
      const long double a = static_cast<long double>(t.a(n));
      CHECK(p.c_n.value() > 1 / (a + 2));
      CHECK(p.c_n.value() < 1 / a);
    }
  }
}

TEST_CASE("certified arithmetic") {
  const Certified third = Certified::from_rational(mpq_class(1, 3), 64);
  CHECK(third.lower() <= mpq_class(1, 3));
  CHECK(third.upper() >= mpq_class(1, 3));
  const Certified three = reciprocal(third);
  CHECK(three.lower() <= 3);
  CHECK(three.upper() >= 3);
  CHECK((third + third - third).lower() <= mpq_class(1, 3));
  CHECK((-third).certified_sign() == -1);
  CHECK(Certified::exact_integer(5, 64).value() == 5);
  CHECK(third.rescaled(32).upper() >= mpq_class(1, 3));
  CHECK_THROWS_AS(reciprocal(Certified{0, 1, 64}), PrecisionError);
}
