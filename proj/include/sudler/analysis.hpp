#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sudler/alpha_spec.hpp"
#include "sudler/sudler.hpp"

namespace sudler {

/// Largest q_n evaluated by the experiment drivers.
inline constexpr std::uint64_t kDeskBound = 10'000'000;

namespace select {
/// n_i = modulus * i + residue, i >= 0, skipping n < 1.
struct ResidueClass {
  std::size_t modulus = 1;
  std::size_t residue = 0;
  bool operator==(const ResidueClass&) const = default;
};
struct ExplicitIndices {
  std::vector<std::size_t> indices;  ///< strictly increasing, >= 1
  bool operator==(const ExplicitIndices&) const = default;
};
/// n_1 = start, n_i = n_{i-1} + i + 1: the positions of the twos in twos:start.
struct TwosPositions {
  std::size_t start = 1;
  bool operator==(const TwosPositions&) const = default;
};
/// n_i = 4^i, i >= 1.
struct PowersOfFour {
  bool operator==(const PowersOfFour&) const = default;
};
}  // namespace select

using SubsequenceSelector =
    std::variant<select::ResidueClass, select::ExplicitIndices, select::TwosPositions, select::PowersOfFour>;

/// The i-th selected index (i >= 1), or nullopt past the end of an explicit list.
std::optional<std::size_t> selected_index(const SubsequenceSelector& sel, std::size_t i);

/// "residue:L,K", "explicit:n1,n2,...", "twos:S" (or "twos" with start 1), "pow4".
/// Throws ParseError.
SubsequenceSelector parse_selector(std::string_view text);
std::string to_string(const SubsequenceSelector& sel);

enum class Verdict { Converging, DivergingToZero, DivergingToInfinity, Inconclusive };
std::string_view to_string(Verdict v);

/// Threshold below which the last three successive differences count as converging.
inline constexpr long double kConvergenceThreshold = 1e-2L;

/// Applies the documented rules to a value sequence:
///   diverging-to-zero: positive, strictly decreasing over the last four
///     points, final < first / 2;
///   diverging-to-infinity: strictly increasing over the last four points,
///     final > 2 * first;
///   converging: the last three |differences| are each below the threshold
///     and strictly decreasing.
/// The diverging rules are tested first. Fewer than four points is inconclusive.
Verdict classify(const std::vector<long double>& values);

/// Number of coefficient offsets tracked by the stabilization detector.
inline constexpr std::size_t kStabilizationOffsets = 4;

struct ProbeRow {
  std::size_t i = 0;
  std::size_t n = 0;
  std::uint64_t q_n = 0;
  long double P = 0;
  long double diff = 0;  ///< |P_i - P_{i-1}|, 0 for the first row
  /// Offsets j whose coefficient a_{n_i + j} (resp. a_{n_i - j}) has not
  /// changed since the previous row.
  std::vector<std::size_t> stable_plus, stable_minus;
  Verdict verdict = Verdict::Inconclusive;  ///< classification of rows 1..i
};

struct ConvergenceReport {
  std::string spec;
  std::string selector;
  std::vector<ProbeRow> rows;
  /// Row number (1-based) of the last change of a_{n_i + j} and a_{n_i - j};
  /// 0 if the coefficient never changed. Indices < 1 read as coefficient 0.
  std::array<std::size_t, kStabilizationOffsets> last_change_plus{};
  std::array<std::size_t, kStabilizationOffsets> last_change_minus{};
  Verdict verdict = Verdict::Inconclusive;
  bool partial = false;           ///< stopped at the desk bound before i_max
  std::size_t first_excluded = 0;  ///< index that exceeded the desk bound

  std::vector<long double> values() const;
  /// Offset j counts as stabilized if its last change is at least two rows
  /// before the end.
  bool stabilized_plus(std::size_t j) const;
  bool stabilized_minus(std::size_t j) const;
  bool fully_stabilized() const;
};

struct ProbeOptions {
  unsigned precision_bits = kDefaultPrecisionBits;
  unsigned threads = 0;
  std::uint64_t desk_bound = kDeskBound;
};

/// Evaluates P_{q_{n_i}} for the first i_max selected indices with q_n >= 3
/// (smaller denominators carry no decomposition and are skipped).
ConvergenceReport convergence_probe(const AlphaSpec& spec, const SubsequenceSelector& sel,
                                    std::size_t i_max, const ProbeOptions& opt = {});

struct LinearFit {
  long double slope = 0;
  long double intercept = 0;
};
/// Ordinary least squares y = slope x + intercept; needs two distinct x.
LinearFit least_squares(const std::vector<long double>& x, const std::vector<long double>& y);

struct EulerTrichotomy {
  std::array<ConvergenceReport, 3> classes;  ///< n = 3i + k, k = 0, 1, 2
  std::array<Verdict, 3> expected{Verdict::DivergingToInfinity, Verdict::DivergingToZero,
                                  Verdict::DivergingToZero};
  LinearFit growth_fit;  ///< P_{q_{3i}}(e) against i^(1/3)
  bool matches_expected() const;
};
EulerTrichotomy euler_trichotomy(std::size_t i_max, const ProbeOptions& opt = {});

struct LimitProduct {
  long double value = 1;
  /// Upper bound on sum_{t > T} 1/(u(t)^2 - 1), which bounds -log of the
  /// omitted factors.
  long double tail_bound = 0;
  long double lower() const;  ///< value * exp(-tail_bound)
};

/// prod_{t=1}^T (1 - 1/u(t)^2), u(t) = 2 (t (alpha_plus + alpha_minus) - {t alpha_minus} + 1/2).
/// Requires alpha_plus > 1 and 0 < alpha_minus < 1; throws RangeError otherwise.
LimitProduct limit_c_product(long double alpha_plus_inf, long double alpha_minus_inf,
                             std::uint64_t T);

enum class FigureId { Fig1a, Fig1b, Fig2a, Fig2b };
FigureId parse_figure_id(std::string_view text);
std::string_view to_string(FigureId id);

struct FigurePoint {
  std::size_t n = 0;
  std::uint64_t q_n = 0;
  long double P = 0;
};

struct FigureSeries {
  std::string label;
  std::string spec;
  std::vector<FigurePoint> points;
};

struct ShapeCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct FigureData {
  FigureId id = FigureId::Fig1a;
  std::vector<FigureSeries> series;
  std::vector<ShapeCheck> checks;
  bool partial = false;
  bool shape_holds() const;
};

FigureData figure_data(FigureId id, const ProbeOptions& opt = {});

}  // namespace sudler
