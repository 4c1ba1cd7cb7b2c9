#include <doctest.h>

#include <cmath>
#include <set>

#include "sudler/alpha_spec.hpp"
#include "sudler/continued_fraction.hpp"
#include "sudler/errors.hpp"
#include "sudler/ostrowski.hpp"

using namespace sudler;

namespace {

OstrowskiBase head(const AlphaSpec& s, std::size_t n) {
  return OstrowskiBase::head_of(convergents_until(s, 0, n + 1), n);
}

using Digits = std::vector<Coefficient>;

}  // namespace

TEST_CASE("base structure") {
  const OstrowskiBase g(Digits{1, 1, 1, 1});
  CHECK(g.validity_limit() == 5);
  CHECK(g.beta() == mpq_class(3, 5));
  for (std::size_t i = 0; i <= 5; ++i) CHECK(g.q(i) == std::vector<int>{0, 1, 1, 2, 3, 5}[i]);
  // q_n of the head base equals q_n(alpha).
  for (const AlphaSpec s : {AlphaSpec{spec::Periodic{{}, {1}}}, AlphaSpec{spec::Euler{}},
                            AlphaSpec{spec::Periodic{{}, {1, 1, 2}}}, AlphaSpec{spec::TwosRule{2}}}) {
    const ConvergentTable t = convergents_until(s, 0, 41);
    for (std::size_t n = 2; n <= 40 && t.q(n) < (mpz_class(1) << 50); ++n) {
      const OstrowskiBase b = OstrowskiBase::head_of(t, n);
      CHECK(b.validity_limit() == t.q(n).get_si());
      CHECK(b.beta() == alpha_minus(t, n));
    }
  }
  // Lambda_i stored exactly: q_i beta - p_i.
  const OstrowskiBase e = head(spec::Euler{}, 9);
  for (std::size_t i = 1; i <= e.length(); ++i) {
    CHECK(e.lambda(i) == e.q(i) * e.beta() - e.p(i));
    CHECK(e.c(i) == e.q(i) * abs(e.lambda(i)));
  }
}

TEST_CASE("encode examples") {
  const OstrowskiBase g(Digits{1, 1, 1, 1});
  CHECK(ostrowski_encode(4, g).v == Digits{0, 1, 0, 1});
  CHECK(format_digits(ostrowski_encode(4, g)) == "0,1,0,1");
  CHECK(format_digits(ostrowski_encode(0, g)) == "0");
  CHECK(ostrowski_encode(0, g).significant_length() == 0);
  for (std::size_t k = 2; k <= 4; ++k) {
    const OstrowskiDigits d = ostrowski_encode(g.q(k), g);
    for (std::size_t i = 1; i <= g.length(); ++i) CHECK(d.digit(i) == (i == k ? 1 : 0));
  }
  CHECK_THROWS_AS(ostrowski_encode(5, g), RangeError);
  CHECK_THROWS_AS(ostrowski_encode(-1, g), RangeError);
  CHECK(ostrowski_encode(4, head(spec::Periodic{{}, {1}}, 6)).v == Digits{0, 1, 0, 1, 0});
}

TEST_CASE("decode examples") {
  const OstrowskiBase g(Digits{1, 1, 1, 1});
  CHECK(ostrowski_decode(Digits{0, 1, 0, 1}, g) == 4);
  const OstrowskiBase four(Digits{4, 1});
  CHECK(ostrowski_decode(Digits{2}, four) == 2);
  CHECK_THROWS_AS(ostrowski_decode(Digits{1, 0, 0, 0}, g), RangeError);  // v_1 < b_1
  CHECK_THROWS_AS(ostrowski_decode(Digits{0, 1, 1, 0}, g), RangeError);  // v_i = b_i needs v_{i-1} = 0
}

TEST_CASE("round trip, constraints and prefix sums") {
  for (const OstrowskiBase& b : {head(spec::Periodic{{}, {1}}, 8), head(spec::Periodic{{}, {1}}, 12),
                                 head(spec::Euler{}, 9), head(spec::Periodic{{}, {1, 1, 2}}, 11),
                                 head(spec::ThueMorse{1, 3}, 8)}) {
    for (std::int64_t t = 0; t < b.validity_limit(); ++t) {
      const OstrowskiDigits d = ostrowski_encode(t, b);
      REQUIRE(digits_valid(d.v, b));
      CHECK(ostrowski_decode(d.v, b) == t);
      std::int64_t prefix = 0;
      for (std::size_t k = 1; k <= d.v.size(); ++k) {
        prefix += d.v[k - 1] * b.q(k);
        CHECK(prefix < b.q(k + 1));
      }
    }
  }
}

TEST_CASE("uniqueness by exhaustive enumeration") {
  for (const OstrowskiBase& b : {head(spec::Periodic{{}, {1}}, 10), head(spec::Euler{}, 8),
                                 head(spec::Periodic{{}, {2, 3}}, 6), OstrowskiBase(Digits{3, 1, 4, 1, 5})}) {
    const std::size_t L = b.length();
    std::vector<int> hits(static_cast<std::size_t>(b.validity_limit()), 0);
    Digits v(L, 0);
    while (true) {
      if (digits_valid(v, b)) {
        const std::int64_t t = ostrowski_decode(v, b);
        REQUIRE(t < b.validity_limit());
        ++hits[static_cast<std::size_t>(t)];
      }
      std::size_t i = 0;
      while (i < L && v[i] == b.b(i + 1)) v[i++] = 0;
      if (i == L) break;
      ++v[i];
    }
    for (int h : hits) CHECK(h == 1);
  }
}

TEST_CASE("D_t examples") {
  const mpq_class beta(3, 5);
  CHECK(d_t_bruteforce(1, beta) == mpq_class(1, 10));
  CHECK(d_t_bruteforce(4, beta) == 0);
  CHECK(d_t_bruteforce(5, beta) == mpq_class(-1, 2));
  const OstrowskiBase g(Digits{1, 1, 1, 1});
  CHECK(d_t_formula(4, g) == 0);
  for (std::int64_t t = 1; t <= 4; ++t) {
    CHECK(d_t_formula(t, g) == std::vector<mpq_class>{mpq_class(1, 10), mpq_class(-1, 5), mpq_class(1, 10), 0}[t - 1]);
  }
  // Base 5/8 (golden, n = 6).
  CHECK(d_t_formula(4, head(spec::Periodic{{}, {1}}, 6)) == mpq_class(1, 4));
  // t = 1: {beta} - 1/2.
  const OstrowskiBase e = head(spec::Euler{}, 9);
  CHECK(d_t_formula(1, e) == e.beta() - mpq_class(1, 2));
  CHECK_THROWS_AS(d_t_formula(0, g), RangeError);
  CHECK_THROWS_AS(d_t_formula(5, g), RangeError);
}

TEST_CASE("closed form equals the direct sum") {
  for (const OstrowskiBase& b : {head(spec::Periodic{{}, {1}}, 20), head(spec::Euler{}, 12),
                                 head(spec::Periodic{{}, {1, 1, 2}}, 16), head(spec::TwosRule{2}, 17)}) {
    const mpq_class beta = b.beta();
    const std::int64_t t_max = std::min<std::int64_t>(10'000, b.validity_limit() - 1);
    const std::vector<std::int64_t> scaled = d_t_formula_scaled_range(t_max, b);
    REQUIRE(static_cast<std::int64_t>(scaled.size()) == t_max);
    // Running exact sum: 2Q({beta s} - 1/2) = 2 (s P mod Q) - Q.
    const std::int64_t Q = b.validity_limit();
    const std::int64_t P = beta.get_num().get_si();
    std::int64_t running = 0;
    for (std::int64_t t = 1; t <= t_max; ++t) {
      running += 2 * ((t * P) % Q) - Q;
      CHECK(scaled[t - 1] == running);
      CHECK(d_t_formula_scaled(t, b) == running);
    }
    for (std::int64_t t : {std::int64_t{1}, t_max / 3, t_max}) {
      CHECK(d_t_formula(t, b) == d_t_bruteforce(t, beta));
    }
  }
}

TEST_CASE("D_t for an irrational base by certified summation") {
  const HighPrecisionAlpha phi = approx_alpha(spec::Periodic{{}, {1}}, 128);
  // For t < q_n the head base alpha_n^- gives D_t of alpha up to O(t/q_n^2).
  const OstrowskiBase b = head(spec::Periodic{{}, {1}}, 30);
  for (std::int64_t t : {1, 10, 100, 1000}) {
    const long double exact_head = d_t_formula(t, b).get_d();
    CHECK(std::fabs(d_t_bruteforce(t, phi) - exact_head) < 1e-6L);
  }
}

TEST_CASE("log bound") {
  const OstrowskiBase g = head(spec::Periodic{{}, {1}}, 17);  // q = 1597
  const LogBoundReport r = d_t_logbound_check(g, 1000);
  CHECK(r.coefficient_bound_holds);
  CHECK(r.digit_bound_holds);
  CHECK(r.max_ratio_to_log < 1.5L);
  for (std::size_t k = 2; k <= g.length(); ++k) {
    CHECK(std::fabs(d_t_formula(g.q(k), g).get_d()) <= 1.5);
  }
}
