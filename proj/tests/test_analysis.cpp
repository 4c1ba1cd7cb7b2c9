#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "sudler/analysis.hpp"
#include "sudler/errors.hpp"
#include "sudler/report.hpp"

using namespace sudler;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("selectors") {
  CHECK(selected_index(select::ResidueClass{3, 0}, 1) == 3u);
  CHECK(selected_index(select::ResidueClass{3, 0}, 4) == 12u);
  CHECK(selected_index(select::ResidueClass{3, 1}, 1) == 1u);
  CHECK(selected_index(select::ResidueClass{3, 2}, 3) == 8u);
  CHECK(selected_index(select::ResidueClass{3, 5}, 1) == 2u);
  // Twos positions of twos:2 are 2, 5, 9, 14, 20.
  for (std::size_t i = 1, want = 2; i <= 5; want += i + 2, ++i) {
    CHECK(selected_index(select::TwosPositions{2}, i) == want);
  }
  CHECK(selected_index(select::PowersOfFour{}, 1) == 4u);
  CHECK(selected_index(select::PowersOfFour{}, 3) == 64u);
  const select::ExplicitIndices ex{{2, 7, 9}};
  CHECK(selected_index(ex, 3) == 9u);
  CHECK_FALSE(selected_index(ex, 4).has_value());
  CHECK_THROWS_AS(selected_index(ex, 0), RangeError);
}

TEST_CASE("selector parsing round trip") {
  for (const char* text : {"residue:3,1", "explicit:2,4,8", "twos:3", "pow4"}) {
    const SubsequenceSelector s = parse_selector(text);
    CHECK(to_string(s) == text);
    CHECK(parse_selector(to_string(s)) == s);
  }
  CHECK(std::get<select::TwosPositions>(parse_selector("twos")).start == 1);
  for (const char* bad : {"", "residue:0,1", "residue:3", "explicit:", "explicit:4,2", "explicit:0,1",
                          "twos:0", "twos:x", "pow5", "residue:3,1,2"}) {
    CHECK_THROWS_AS(parse_selector(bad), ParseError);
  }
}

TEST_CASE("classify") {
  CHECK(classify({}) == Verdict::Inconclusive);
  CHECK(classify({1.0L, 1.0L, 1.0L}) == Verdict::Inconclusive);
  CHECK(classify({2.5L, 2.41L, 2.408L, 2.4072L, 2.40712L}) == Verdict::Converging);
  // Small but not shrinking differences.
  CHECK(classify({2.4L, 2.401L, 2.4L, 2.401L, 2.4L}) == Verdict::Inconclusive);
  // Shrinking but too large.
  CHECK(classify({1.0L, 1.5L, 1.3L, 1.22L, 1.2L}) == Verdict::Inconclusive);
  CHECK(classify({4.0L, 3.0L, 2.0L, 1.5L}) == Verdict::DivergingToZero);
  CHECK(classify({4.0L, 3.0L, 2.5L, 2.1L}) == Verdict::Inconclusive);
  CHECK(classify({1.0L, 1.5L, 1.9L, 2.3L}) == Verdict::DivergingToInfinity);
  CHECK(classify({1.0L, 1.5L, 1.7L, 1.9L}) == Verdict::Inconclusive);
  // Only the last four points matter for monotonicity.
  CHECK(classify({9.0L, 1.0L, 1.5L, 1.9L, 2.3L}) == Verdict::Inconclusive);
  CHECK(classify({0.5L, 1.0L, 1.5L, 1.9L, 2.3L}) == Verdict::DivergingToInfinity);
}

TEST_CASE("golden probe converges") {
  const ConvergenceReport r =
      convergence_probe(spec::Periodic{{}, {1}}, select::ResidueClass{1, 0}, 25);
  REQUIRE(r.rows.size() == 25);
  CHECK(r.rows.front().n == 4);  // q_1..q_3 < 3 are skipped
  CHECK(r.rows.front().q_n == 3);
  CHECK(r.verdict == Verdict::Converging);
  CHECK(r.rows.back().P == doctest::Approx(2.40711428L).epsilon(1e-6));
  CHECK(r.fully_stabilized());
  CHECK_FALSE(r.partial);
  CHECK(r.values().size() == 25);
}

TEST_CASE("probe stops at the desk bound") {
  ProbeOptions opt;
  opt.desk_bound = 1000;
  const ConvergenceReport r = convergence_probe(spec::Periodic{{}, {1}}, select::ResidueClass{1, 0}, 50, opt);
  CHECK(r.partial);
  CHECK(r.first_excluded == 17);  // q_16 = 987, q_17 = 1597
  CHECK(r.rows.back().n == 16);
}

TEST_CASE("stabilization detector on twos") {
  const ConvergenceReport r = convergence_probe(spec::TwosRule{2}, select::TwosPositions{2}, 4);
  REQUIRE(r.rows.size() == 4);
  // a_{n_i} = 2 at every row, neighbours are 1.
  for (std::size_t j = 0; j < kStabilizationOffsets; ++j) {
    CHECK(r.stabilized_plus(j));
    CHECK(r.stabilized_minus(j));
  }
  const ConvergenceReport e = convergence_probe(spec::Euler{}, select::ResidueClass{3, 2}, 4);
  CHECK_FALSE(e.stabilized_plus(0));  // a_{3i+2} = 2(i+1) keeps changing
  CHECK(e.stabilized_plus(1));
}

TEST_CASE("least squares") {
  const LinearFit f = least_squares({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2));
  CHECK(f.intercept == doctest::Approx(1));
  const LinearFit g = least_squares({0, 1, 2}, {0, 1, 0});
  CHECK(g.slope == doctest::Approx(0));
  CHECK(g.intercept == doctest::Approx(1.0 / 3));
  CHECK_THROWS(least_squares({1, 1}, {0, 1}));
}

TEST_CASE("limit_c_product") {
  const long double phi = (1 + std::sqrt(5.0L)) / 2;
  const LimitProduct t0 = limit_c_product(phi, phi - 1, 0);
  CHECK(t0.value == 1);
  CHECK(std::isinf(t0.tail_bound));
  // First factor by hand: u(1) = 2 (sqrt 5 - (phi - 1) + 1/2).
  const long double u1 = 2 * (std::sqrt(5.0L) - (phi - 1) + 0.5L);
  CHECK(limit_c_product(phi, phi - 1, 1).value == doctest::Approx(1 - 1 / (u1 * u1)));
  const LimitProduct big = limit_c_product(phi, phi - 1, 100'000);
  CHECK(big.value > 0.6L);
  CHECK(big.value < 1);
  CHECK(big.lower() <= big.value);
  CHECK(big.value - big.lower() < 1e-5L);
  const SudlerPoint p = decompose(spec::Periodic{{}, {1}}, 18);
  CHECK(std::fabs(big.value - p.C_n) < 1e-3L);
  CHECK_THROWS_AS(limit_c_product(0.9L, 0.5L, 10), RangeError);
  CHECK_THROWS_AS(limit_c_product(2, 1, 10), RangeError);
}

TEST_CASE("figure ids") {
  for (const char* id : {"fig1a", "fig1b", "fig2a", "fig2b"}) CHECK(to_string(parse_figure_id(id)) == id);
  CHECK_THROWS_AS(parse_figure_id("fig3"), ParseError);
}

TEST_CASE("fig1a data") {
  const FigureData f = figure_data(FigureId::Fig1a);
  REQUIRE(f.series.size() == 1);
  CHECK(f.series[0].points.size() == 19);
  CHECK(f.shape_holds());
  // e = [0;1,2,1,...]: the convergent at n = 3 is [0;1,2] = 2/3.
  CHECK(f.series[0].points[2].q_n == 3);
}

TEST_CASE("CSV writers") {
  const ConvergenceReport r = convergence_probe(spec::Periodic{{}, {1}}, select::ResidueClass{2, 0}, 4);
  std::ostringstream os;
  write_probe_csv(os, r, 160);
  const auto lines = lines_of(os.str());
  REQUIRE(lines.size() == 7);
  CHECK(lines[0] == "# spec=golden precision_bits=160 version=sudler-tools 0.1.0");
  CHECK(lines[1] == "# selector=residue:2,0");
  CHECK(lines[2] == "i,n_i,q_ni,P,diff,stabilized_offsets_plus,stabilized_offsets_minus,verdict");
  CHECK(lines[3].rfind("1,4,3,", 0) == 0);

  std::vector<SudlerRow> rows(1);
  rows[0].spec = "golden";
  rows[0].point = decompose(spec::Periodic{{}, {1}}, 6);
  std::ostringstream so;
  write_sudler_csv(so, rows, 160);
  const auto sl = lines_of(so.str());
  REQUIRE(sl.size() == 3);
  CHECK(sl[1] == "spec,n,q_n,log_P,A_n,log_B_n,C_n,residual,c_n,S_n,core,ratio,Y_n");
  CHECK(sl[2].rfind("golden,6,8,", 0) == 0);
  CHECK(sl[2].substr(sl[2].size() - 3) == ",,,");

  CHECK(format_ld(0.5L) == "0.5");
  CHECK(format_ld(-std::numeric_limits<long double>::infinity()) == "-inf");
  CHECK(std::stold(format_ld(2.40711428123456789L)) == 2.40711428123456789L);
}
