#include "sudler/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "sudler/errors.hpp"
#include "sudler/parallel.hpp"

namespace sudler {
namespace {

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ParseError("selector: bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::size_t> parse_count_list(std::string_view text, std::string_view what) {
  std::vector<std::size_t> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_count(text.substr(0, comma), what));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

Coefficient coefficient_or_zero(const AlphaSpec& spec, std::size_t n, std::size_t j, bool plus) {
  if (plus) return coefficient_at(spec, n + j);
  return n > j ? coefficient_at(spec, n - j) : 0;
}

bool strictly_monotone(const std::vector<long double>& v, std::size_t from, bool increasing) {
  for (std::size_t i = from + 1; i < v.size(); ++i) {
    if (increasing ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::string format_value(long double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::optional<std::size_t> selected_index(const SubsequenceSelector& sel, std::size_t i) {
  if (i == 0) throw RangeError("selector positions start at 1");
  return std::visit(
      [i](const auto& s) -> std::optional<std::size_t> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, select::ResidueClass>) {
          // Enumerate n >= 1 with n = k (mod l).
          const std::size_t k = s.residue % s.modulus;
          const std::size_t first = k == 0 ? s.modulus : k;
          return first + (i - 1) * s.modulus;
        } else if constexpr (std::is_same_v<T, select::ExplicitIndices>) {
          if (i > s.indices.size()) return std::nullopt;
          return s.indices[i - 1];
        } else if constexpr (std::is_same_v<T, select::TwosPositions>) {
          // n_i = start + sum_{m=2}^{i} (m + 1)
          return s.start + (i - 1) * (i + 4) / 2;
        } else {
          if (i >= 32) throw RangeError("PowersOfFour: index overflow");
          return std::size_t{1} << (2 * i);
        }
      },
      sel);
}

SubsequenceSelector parse_selector(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "residue") {
    const auto v = parse_count_list(rest, "residue arguments");
    if (v.size() != 2 || v[0] == 0) throw ParseError("selector: expected residue:L,K with L >= 1");
    return select::ResidueClass{v[0], v[1] % v[0]};
  }
  if (head == "explicit") {
    const auto v = parse_count_list(rest, "index");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == 0 || (i > 0 && v[i] <= v[i - 1])) {
        throw ParseError("selector: explicit indices must be >= 1 and strictly increasing");
      }
    }
    return select::ExplicitIndices{v};
  }
  if (head == "twos") {
    const std::size_t start = colon == std::string_view::npos ? 1 : parse_count(rest, "start");
    if (start == 0) throw ParseError("selector: twos start must be >= 1");
    return select::TwosPositions{start};
  }
  if (head == "pow4" && colon == std::string_view::npos) return select::PowersOfFour{};
  throw ParseError("unknown selector '" + std::string(text) + "'");
}

std::string to_string(const SubsequenceSelector& sel) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, select::ResidueClass>) {
          return "residue:" + std::to_string(s.modulus) + "," + std::to_string(s.residue);
        } else if constexpr (std::is_same_v<T, select::ExplicitIndices>) {
          std::string out = "explicit:";
          for (std::size_t i = 0; i < s.indices.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(s.indices[i]);
          }
          return out;
        } else if constexpr (std::is_same_v<T, select::TwosPositions>) {
          return "twos:" + std::to_string(s.start);
        } else {
          return "pow4";
        }
      },
      sel);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Converging: return "converging";
    case Verdict::DivergingToZero: return "diverging-to-zero";
    case Verdict::DivergingToInfinity: return "diverging-to-infinity";
    case Verdict::Inconclusive: break;
  }
  return "inconclusive";
}

Verdict classify(const std::vector<long double>& values) {
  const std::size_t k = values.size();
  if (k < 4) return Verdict::Inconclusive;
  const long double first = values.front();
  const long double last = values.back();
  const bool positive = std::all_of(values.begin(), values.end(), [](long double v) { return v > 0; });
  if (positive && strictly_monotone(values, k - 4, false) && last < first / 2) {
    return Verdict::DivergingToZero;
  }
  if (strictly_monotone(values, k - 4, true) && last > 2 * first) return Verdict::DivergingToInfinity;
  const long double d1 = std::fabs(values[k - 3] - values[k - 4]);
  const long double d2 = std::fabs(values[k - 2] - values[k - 3]);
  const long double d3 = std::fabs(values[k - 1] - values[k - 2]);
  if (d1 < kConvergenceThreshold && d2 < kConvergenceThreshold && d3 < kConvergenceThreshold &&
      d2 < d1 && d3 < d2) {
    return Verdict::Converging;
  }
  return Verdict::Inconclusive;
}

std::vector<long double> ConvergenceReport::values() const {
  std::vector<long double> out;
  out.reserve(rows.size());
  for (const ProbeRow& r : rows) out.push_back(r.P);
  return out;
}

bool ConvergenceReport::stabilized_plus(std::size_t j) const {
  return rows.size() >= 2 && last_change_plus.at(j) + 2 <= rows.size();
}

bool ConvergenceReport::stabilized_minus(std::size_t j) const {
  return rows.size() >= 2 && last_change_minus.at(j) + 2 <= rows.size();
}

bool ConvergenceReport::fully_stabilized() const {
  for (std::size_t j = 0; j < kStabilizationOffsets; ++j) {
    if (!stabilized_plus(j) || !stabilized_minus(j)) return false;
  }
  return true;
}

ConvergenceReport convergence_probe(const AlphaSpec& spec, const SubsequenceSelector& sel,
                                    std::size_t i_max, const ProbeOptions& opt) {
  ConvergenceReport rep;
  rep.spec = to_string(spec);
  rep.selector = to_string(sel);
  std::vector<long double> values;
  std::array<Coefficient, kStabilizationOffsets> prev_plus{}, prev_minus{};

  for (std::size_t pos = 1; rep.rows.size() < i_max; ++pos) {
    const std::optional<std::size_t> n = selected_index(sel, pos);
    if (!n) break;
    const ConvergentTable table = convergents_until(spec, 0, *n);
    const mpz_class& q = table.q(*n);
    if (q < 3) continue;
    if (q > mpz_class(static_cast<unsigned long>(opt.desk_bound))) {
      rep.partial = true;
      rep.first_excluded = *n;
      break;
    }
    const SudlerPoint pt = decompose(index_data(spec, *n, opt.precision_bits), opt.threads);

    ProbeRow row;
    row.i = rep.rows.size() + 1;
    row.n = *n;
    row.q_n = pt.q_n;
    row.P = pt.P();
    row.diff = rep.rows.empty() ? 0 : std::fabs(row.P - rep.rows.back().P);
    for (std::size_t j = 0; j < kStabilizationOffsets; ++j) {
      const Coefficient plus = coefficient_or_zero(spec, *n, j, true);
      const Coefficient minus = coefficient_or_zero(spec, *n, j, false);
      if (row.i > 1) {
        if (plus == prev_plus[j]) row.stable_plus.push_back(j); else rep.last_change_plus[j] = row.i;
        if (minus == prev_minus[j]) row.stable_minus.push_back(j); else rep.last_change_minus[j] = row.i;
      }
      prev_plus[j] = plus;
      prev_minus[j] = minus;
    }
    values.push_back(row.P);
    row.verdict = classify(values);
    rep.rows.push_back(std::move(row));
  }
  rep.verdict = classify(values);
  return rep;
}

LinearFit least_squares(const std::vector<long double>& x, const std::vector<long double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw RangeError("least_squares needs >= 2 paired points");
  const auto k = static_cast<long double>(x.size());
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  long double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw RangeError("least_squares needs two distinct abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

bool EulerTrichotomy::matches_expected() const {
  for (std::size_t k = 0; k < 3; ++k) {
    if (classes[k].verdict != expected[k]) return false;
  }
  return true;
}

EulerTrichotomy euler_trichotomy(std::size_t i_max, const ProbeOptions& opt) {
  EulerTrichotomy out;
  const AlphaSpec e = spec::Euler{};
  for (std::size_t k = 0; k < 3; ++k) {
    out.classes[k] = convergence_probe(e, select::ResidueClass{3, k}, i_max, opt);
  }
  std::vector<long double> x, y;
  for (const ProbeRow& r : out.classes[0].rows) {
    x.push_back(std::cbrt(static_cast<long double>(r.n / 3)));
    y.push_back(r.P);
  }
  if (x.size() >= 2) out.growth_fit = least_squares(x, y);
  return out;
}

long double LimitProduct::lower() const { return value * std::exp(-tail_bound); }

LimitProduct limit_c_product(long double alpha_plus_inf, long double alpha_minus_inf, std::uint64_t T) {
  if (!(alpha_plus_inf > 1) || !(alpha_minus_inf > 0 && alpha_minus_inf < 1)) {
    throw RangeError("limit_c_product needs alpha_plus > 1 and 0 < alpha_minus < 1");
  }
  const long double s = alpha_plus_inf + alpha_minus_inf;
  LimitProduct out;
  if (T == 0) {
    out.tail_bound = std::numeric_limits<long double>::infinity();
    return out;
  }
  CompensatedSum log_prod;
  for (std::uint64_t t = 1; t <= T; ++t) {
    const auto tt = static_cast<long double>(t);
    const long double frac = tt * alpha_minus_inf - std::floor(tt * alpha_minus_inf);
    const long double u = 2 * (tt * s - frac + 0.5L);
    log_prod.add(std::log1p(-1 / (u * u)));
  }
  out.value = std::exp(log_prod.value());
  // u(t) >= 2ts - 1 gives 1/(u^2 - 1) <= 1/(4 s^2 t (t - 1)) for s >= 1.
  out.tail_bound = 1 / (4 * s * s * static_cast<long double>(T));
  return out;
}

FigureId parse_figure_id(std::string_view text) {
  if (text == "fig1a") return FigureId::Fig1a;
  if (text == "fig1b") return FigureId::Fig1b;
  if (text == "fig2a") return FigureId::Fig2a;
  if (text == "fig2b") return FigureId::Fig2b;
  throw ParseError("unknown figure '" + std::string(text) + "' (expected fig1a|fig1b|fig2a|fig2b)");
}

std::string_view to_string(FigureId id) {
  switch (id) {
    case FigureId::Fig1a: return "fig1a";
    case FigureId::Fig1b: return "fig1b";
    case FigureId::Fig2a: return "fig2a";
    case FigureId::Fig2b: break;
  }
  return "fig2b";
}

bool FigureData::shape_holds() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const ShapeCheck& c) { return c.pass; });
}

namespace {

FigureSeries index_range_series(const AlphaSpec& spec, std::size_t n_max, const ProbeOptions& opt,
                                bool& partial) {
  FigureSeries s;
  s.spec = to_string(spec);
  s.label = s.spec;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const IndexData d = index_data(spec, n, opt.precision_bits);
    if (d.q_n > opt.desk_bound) {
      partial = true;
      break;
    }
    s.points.push_back({n, d.q_n, decompose(d, opt.threads).P()});
  }
  return s;
}

FigureSeries series_from_report(const ConvergenceReport& rep, std::string label) {
  FigureSeries s;
  s.label = std::move(label);
  s.spec = rep.spec;
  for (const ProbeRow& r : rep.rows) s.points.push_back({r.n, r.q_n, r.P});
  return s;
}

/// Values of the points with q_n >= 3 and n = k (mod 3), in index order.
std::vector<long double> residue_values(const FigureSeries& s, std::size_t k) {
  std::vector<long double> out;
  for (const FigurePoint& p : s.points) {
    if (p.q_n >= 3 && p.n % 3 == k) out.push_back(p.P);
  }
  return out;
}

ShapeCheck monotone_check(const FigureSeries& s, std::size_t k, bool increasing) {
  const std::vector<long double> v = residue_values(s, k);
  ShapeCheck c;
  c.name = "n = " + std::to_string(k) + " mod 3 strictly " + (increasing ? "increasing" : "decreasing");
  c.pass = v.size() >= 2 && strictly_monotone(v, 0, increasing);
  c.detail = std::to_string(v.size()) + " points";
  if (!v.empty()) c.detail += ", first " + format_value(v.front()) + ", last " + format_value(v.back());
  return c;
}

ShapeCheck verdict_check(const std::string& name, const std::vector<long double>& v) {
  ShapeCheck c;
  c.name = name;
  const Verdict verdict = classify(v);
  c.pass = verdict == Verdict::Converging;
  c.detail = std::string(to_string(verdict)) + " over " + std::to_string(v.size()) + " points";
  if (!v.empty()) c.detail += ", last " + format_value(v.back());
  return c;
}

}  // namespace

FigureData figure_data(FigureId id, const ProbeOptions& opt) {
  FigureData fig;
  fig.id = id;
  switch (id) {
    case FigureId::Fig1a: {
      fig.series.push_back(index_range_series(spec::Euler{}, 19, opt, fig.partial));
      fig.checks.push_back(monotone_check(fig.series[0], 0, true));
      fig.checks.push_back(monotone_check(fig.series[0], 1, false));
      fig.checks.push_back(monotone_check(fig.series[0], 2, false));
      break;
    }
    case FigureId::Fig1b: {
      fig.series.push_back(index_range_series(spec::Periodic{{}, {1, 1, 2}}, 19, opt, fig.partial));
      for (std::size_t k = 0; k < 3; ++k) {
        fig.checks.push_back(verdict_check("n = " + std::to_string(k) + " mod 3 converging",
                                           residue_values(fig.series[0], k)));
      }
      break;
    }
    case FigureId::Fig2a: {
      fig.series.push_back(index_range_series(spec::TwosRule{2}, 30, opt, fig.partial));
      ShapeCheck c;
      c.name = "n = 1..30 complete";
      c.pass = fig.series[0].points.size() == 30;
      c.detail = std::to_string(fig.series[0].points.size()) + " points";
      fig.checks.push_back(c);
      break;
    }
    case FigureId::Fig2b: {
      const AlphaSpec twos = spec::TwosRule{2};
      for (std::size_t start = 1; start <= 3; ++start) {
        const ConvergenceReport rep = convergence_probe(twos, select::TwosPositions{start}, 64, opt);
        const std::string label = "n_1=" + std::to_string(start);
        fig.series.push_back(series_from_report(rep, label));
        fig.checks.push_back(verdict_check(label + " converging", rep.values()));
      }
      break;
    }
  }
  return fig;
}

}  // namespace sudler
