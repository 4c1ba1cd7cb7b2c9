#include "sudler/checks.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "sudler/analysis.hpp"
#include "sudler/ostrowski.hpp"

namespace sudler {
namespace {

struct Evaluated {
  IndexData data;
  SudlerPoint point;
};

/// Memoized decompositions for the run.
class Workbench {
 public:
  explicit Workbench(const CheckOptions& opt) : opt_(opt) {}

  const CheckOptions& options() const { return opt_; }
  ProbeOptions probe_options() const { return {opt_.precision_bits, opt_.threads, opt_.q_bound}; }

  /// Indices n >= 1 with lo <= q_n <= q_bound, in order.
  std::vector<std::size_t> indices(const AlphaSpec& spec, std::uint64_t lo) const {
    std::vector<std::size_t> out;
    const ConvergentTable t = convergents_until(spec, mpz_class(static_cast<unsigned long>(opt_.q_bound)), 2);
    for (std::size_t n = 1; n <= t.size() && t.q(n) <= opt_.q_bound; ++n) {
      if (t.q(n) >= lo) out.push_back(n);
    }
    return out;
  }

  const Evaluated& at(const AlphaSpec& spec, std::size_t n) {
    const auto key = std::make_pair(to_string(spec), n);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      IndexData d = index_data(spec, n, opt_.precision_bits);
      SudlerPoint p = decompose(d, opt_.threads);
      it = cache_.emplace(key, Evaluated{std::move(d), p}).first;
    }
    return it->second;
  }

 private:
  CheckOptions opt_;
  std::map<std::pair<std::string, std::size_t>, Evaluated> cache_;
};

const std::vector<AlphaSpec>& test_matrix() {
  static const std::vector<AlphaSpec> specs{spec::Periodic{{}, {1}}, spec::Periodic{{}, {1, 1, 2}},
                                            spec::Euler{}, spec::TwosRule{2}};
  return specs;
}

const std::vector<AlphaSpec>& bounded_specs() {
  static const std::vector<AlphaSpec> specs{spec::Periodic{{}, {1}}, spec::Periodic{{}, {1, 1, 2}},
                                            spec::TwosRule{2}};
  return specs;
}

std::string fmt(long double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

bool strictly_decreasing(const std::vector<long double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

bool strictly_increasing(const std::vector<long double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

CheckResult decomposition_identity(Workbench& wb) {
  CheckResult r{1, "decomposition identity", true, {}, 0};
  long double worst = 0;
  std::size_t count = 0;
  std::string worst_at;
  for (const AlphaSpec& s : test_matrix()) {
    for (std::size_t n : wb.indices(s, 3)) {
      const SudlerPoint& p = wb.at(s, n).point;
      ++count;
      if (!(p.residual < kDecompositionTolerance)) r.pass = false;
      if (p.residual > worst || worst_at.empty()) {
        worst = p.residual;
        worst_at = to_string(s) + " n=" + std::to_string(n);
      }
    }
  }
  r.detail = std::to_string(count) + " indices, max residual " + fmt(worst) + " at " + worst_at;
  return r;
}

/// Every valid digit string of `base` decodes to a distinct t, and together
/// they cover [0, q_{L+1}).
bool exhaustive_unique(const OstrowskiBase& base) {
  const std::size_t L = base.length();
  std::vector<Coefficient> v(L, 0);
  std::vector<bool> seen(static_cast<std::size_t>(base.validity_limit()), false);
  std::size_t hits = 0;
  bool ok = true;
  // Odometer over 0 <= v_i <= b_i.
  while (ok) {
    if (digits_valid(v, base)) {
      const std::int64_t t = ostrowski_decode(v, base);
      if (t < 0 || t >= base.validity_limit() || seen[static_cast<std::size_t>(t)]) {
        ok = false;
      } else {
        seen[static_cast<std::size_t>(t)] = true;
        ++hits;
      }
    }
    std::size_t i = 0;
    while (i < L && v[i] == base.b(i + 1)) v[i++] = 0;
    if (i == L) break;
    ++v[i];
  }
  return ok && hits == static_cast<std::size_t>(base.validity_limit());
}

CheckResult ostrowski_correctness(Workbench&) {
  CheckResult r{2, "Ostrowski correctness", true, {}, 0};
  std::ostringstream detail;
  const std::vector<std::pair<AlphaSpec, std::size_t>> round_trip{{spec::Periodic{{}, {1}}, 12},
                                                                  {spec::Euler{}, 9}};
  for (const auto& [s, n] : round_trip) {
    const OstrowskiBase base = OstrowskiBase::head_of(convergents_until(s, 0, n + 1), n);
    std::int64_t failures = 0;
    for (std::int64_t t = 0; t < base.validity_limit(); ++t) {
      const OstrowskiDigits d = ostrowski_encode(t, base);
      if (!digits_valid(d.v, base) || ostrowski_decode(d.v, base) != t) ++failures;
    }
    if (failures) r.pass = false;
    detail << to_string(s) << " n=" << n << ": " << base.validity_limit() << " round trips, " << failures
           << " failures; ";
  }
  std::size_t bases = 0;
  for (const AlphaSpec& s : test_matrix()) {
    const ConvergentTable t = convergents_until(s, 10'000, 2);
    for (std::size_t n = 2; n <= t.size() && t.q(n) <= 10'000; ++n) {
      ++bases;
      if (!exhaustive_unique(OstrowskiBase::head_of(t, n))) {
        r.pass = false;
        detail << "uniqueness fails for " << to_string(s) << " n=" << n << "; ";
      }
    }
  }
  detail << "exhaustive uniqueness over " << bases << " bases with q <= 1e4";
  r.detail = detail.str();
  return r;
}

CheckResult dt_equivalence(Workbench&) {
  CheckResult r{3, "D_t closed form equals the direct sum", true, {}, 0};
  const std::vector<std::pair<AlphaSpec, std::size_t>> bases{
      {spec::Periodic{{}, {1}}, 6}, {spec::Periodic{{}, {1}}, 10}, {spec::Euler{}, 6},
      {spec::Euler{}, 9},           {spec::Periodic{{}, {1, 1, 2}}, 6}, {spec::Periodic{{}, {1, 1, 2}}, 9}};
  std::ostringstream detail;
  std::size_t compared = 0;
  for (const auto& [s, n] : bases) {
    const OstrowskiBase base = OstrowskiBase::head_of(convergents_until(s, 0, n + 1), n);
    const mpq_class beta = base.beta();
    const std::int64_t t_max = std::min<std::int64_t>(10'000, base.validity_limit() - 1);
    for (std::int64_t t = 1; t <= t_max; ++t, ++compared) {
      if (d_t_formula(t, base) != d_t_bruteforce(t, beta)) {
        r.pass = false;
        detail << "mismatch " << to_string(s) << " n=" << n << " t=" << t << "; ";
      }
    }
  }
  detail << compared << " exact comparisons in 6 bases (1 <= t < q_n)";
  r.detail = detail.str();
  return r;
}

CheckResult sine_identity(Workbench& wb) {
  CheckResult r{4, "rational sine-product identity", true, {}, 0};
  std::mt19937_64 rng(wb.options().seed);
  std::uniform_int_distribution<std::int64_t> qdist(2, 10'000);
  long double worst_identity = 0, worst_direct = 0;
  for (int k = 0; k < 100; ++k) {
    std::int64_t q = 0, p = 0;
    do {
      q = qdist(rng);
      p = std::uniform_int_distribution<std::int64_t>(1, q - 1)(rng);
    } while (std::gcd(p, q) != 1);
    worst_identity = std::max(worst_identity, sin_product_identity(p, q).relative_deviation);
    const HighPrecisionAlpha a = HighPrecisionAlpha::from_rational(mpq_class(p, q), 192);
    const long double log_p = sudler_direct(a, static_cast<std::uint64_t>(q - 1), wb.options().threads);
    worst_direct = std::max(worst_direct,
                            std::fabs(std::expm1(log_p - std::log(static_cast<long double>(q)))));
  }
  r.pass = worst_identity < 1e-8L && worst_direct < 1e-8L;
  r.detail = "100 coprime pairs, max relative deviation " + fmt(worst_identity) +
             " (direct product " + fmt(worst_direct) + ")";
  return r;
}

CheckResult lambda_bounds(Workbench& wb) {
  CheckResult r{5, "|Lambda_n| bounds and c_n = q_n |Lambda_n|", true, {}, 0};
  std::vector<AlphaSpec> specs = test_matrix();
  specs.push_back(spec::Periodic{{}, {2}});
  specs.push_back(spec::ThueMorse{1, 2});
  const mpq_class tolerance(mpz_class(1), mpz_class("100000000000000000000"));  // 1e-20
  std::size_t tested = 0;
  mpq_class worst_gap = 0;
  for (const AlphaSpec& s : specs) {
    const ConvergentTable t = convergents_until(s, 0, 62);
    for (std::size_t n = 1; n <= 60; ++n, ++tested) {
      const TailHeadPair pair = lambda_and_c(s, n, wb.options().precision_bits);
      const mpq_class lo = abs(pair.lambda_n).lower();
      const mpq_class hi = abs(pair.lambda_n).upper();
      const mpz_class& q_next = t.q(n + 1);
      const bool bounds = lo >= mpq_class(1) / (2 * q_next) && hi <= mpq_class(1) / q_next;
      const Certified gap = pair.c_n_from_lambda - pair.c_n;
      const mpq_class gap_bound = abs(gap.exact_value()) + gap.error_bound();
      worst_gap = std::max(worst_gap, gap_bound);
      const int expected_sign = n % 2 == 1 ? 1 : -1;
      if (!bounds || gap_bound >= tolerance || pair.lambda_sign != expected_sign) {
        r.pass = false;
        r.detail += to_string(s) + " n=" + std::to_string(n) + " fails; ";
      }
    }
  }
  r.detail += std::to_string(tested) + " (spec, n) pairs, n = 1..60; certified max |q_n|Lambda_n| - c_n| <= " +
              fmt(static_cast<long double>(worst_gap.get_d()));
  return r;
}

CheckResult symmetries(Workbench& wb) {
  CheckResult r{6, "s/h/xi symmetries", true, {}, 0};
  long double worst_s = 0, worst_h = 0;
  std::size_t pairs = 0;
  for (const AlphaSpec& s : test_matrix()) {
    const ConvergentTable table = convergents_until(s, 100'000, 2);
    for (std::size_t n = 2; n <= table.size() && table.q(n) <= 100'000; ++n) {
      const auto q = static_cast<std::int64_t>(table.q(n).get_si());
      if (q < 2) continue;
      const TailHeadPair pair = lambda_and_c(s, n, wb.options().precision_bits);
      for (std::int64_t t = 1; t < q; ++t, ++pairs) {
        if (xi_nt(table, n, t) != -xi_nt(table, n, q - t)) r.pass = false;
        worst_s = std::max(worst_s, std::fabs(s_nt(pair, t) - s_nt(pair, q - t)));
        worst_h = std::max(worst_h, std::fabs(h_nt(pair, t) - h_nt(pair, q - t)));
      }
    }
  }
  if (!(worst_s < 1e-12L && worst_h < 1e-12L)) r.pass = false;
  r.detail = std::to_string(pairs) + " (n, t) pairs with q_n <= 1e5; xi exact" +
             std::string(r.pass ? "" : " or value mismatch") + ", max |s diff| " + fmt(worst_s) +
             ", max |h diff| " + fmt(worst_h);
  return r;
}

CheckResult golden_trend(Workbench& wb) {
  CheckResult r{7, "golden ratio plateau", true, {}, 0};
  const AlphaSpec golden = spec::Periodic{{}, {1}};
  const std::vector<std::size_t> idx = wb.indices(golden, 1);
  std::vector<long double> values, diffs;
  std::vector<std::size_t> ns;
  for (std::size_t n : idx) {
    values.push_back(wb.at(golden, n).point.P());
    ns.push_back(n);
  }
  for (std::size_t i = 1; i < values.size(); ++i) diffs.push_back(std::fabs(values[i] - values[i - 1]));
  bool small_from_20 = ns.size() >= 21;
  for (std::size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] >= 20 && !(diffs[i - 1] < 1e-3L)) small_from_20 = false;
  }
  const bool shrinking = diffs.size() >= 5 && strictly_decreasing({diffs.end() - 5, diffs.end()});
  r.pass = small_from_20 && shrinking;
  r.detail = "n = 1.." + std::to_string(ns.back()) + ", plateau P = " + fmt(values.back()) +
             " (measured, not asserted), last diff " + fmt(diffs.back()) +
             (shrinking ? ", last 5 diffs shrinking" : ", last 5 diffs NOT shrinking");
  return r;
}

CheckResult euler_trichotomy_check(Workbench& wb) {
  CheckResult r{8, "Euler trichotomy", true, {}, 0};
  const AlphaSpec e = spec::Euler{};
  std::array<std::vector<long double>, 3> v;
  std::vector<long double> x0;
  for (std::size_t n : wb.indices(e, 3)) {
    v[n % 3].push_back(wb.at(e, n).point.P());
    if (n % 3 == 0) x0.push_back(std::cbrt(static_cast<long double>(n / 3)));
  }
  const bool up = v[0].size() >= 2 && strictly_increasing(v[0]);
  const long double up_ratio = v[0].back() / v[0].front();
  const LinearFit fit = least_squares(x0, v[0]);
  std::ostringstream d;
  d << "k=0: " << v[0].size() << " pts " << (up ? "increasing" : "NOT increasing") << ", final/initial "
    << fmt(up_ratio) << (up_ratio > 2 ? "" : " (needs > 2)") << ", i^(1/3) slope " << fmt(fit.slope);
  r.pass = up && up_ratio > 2 && fit.slope > 0;
  for (std::size_t k = 1; k <= 2; ++k) {
    const bool down = v[k].size() >= 2 && strictly_decreasing(v[k]);
    const long double ratio = v[k].back() / v[k].front();
    d << "; k=" << k << ": " << v[k].size() << " pts " << (down ? "decreasing" : "NOT decreasing")
      << ", final/initial " << fmt(ratio) << (ratio < 0.5L ? "" : " (needs < 0.5)");
    if (!down || !(ratio < 0.5L)) r.pass = false;
  }
  r.detail = d.str();
  return r;
}

CheckResult probe_examples(Workbench& wb) {
  CheckResult r{9, "convergence probes", true, {}, 0};
  const ProbeOptions po = wb.probe_options();
  std::ostringstream d;
  const AlphaSpec quad = spec::Periodic{{}, {1, 1, 2}};
  for (std::size_t k = 0; k < 3; ++k) {
    const ConvergenceReport rep = convergence_probe(quad, select::ResidueClass{3, k}, 64, po);
    const bool ok = rep.verdict == Verdict::Converging && rep.fully_stabilized();
    if (!ok) r.pass = false;
    d << "quad k=" << k << ' ' << to_string(rep.verdict) << (rep.fully_stabilized() ? " stable" : " unstable")
      << "; ";
  }
  const AlphaSpec twos = spec::TwosRule{2};
  for (std::size_t start = 1; start <= 3; ++start) {
    const ConvergenceReport rep = convergence_probe(twos, select::TwosPositions{start}, 64, po);
    const bool ok = rep.verdict == Verdict::Converging && rep.fully_stabilized();
    if (!ok) r.pass = false;
    d << "twos:2 n_1=" << start << ' ' << to_string(rep.verdict) << " (" << rep.rows.size()
      << " pts, last diff " << fmt(rep.rows.empty() ? 0 : rep.rows.back().diff) << ")"
      << (rep.fully_stabilized() ? " stable" : " unstable") << "; ";
  }
  const ConvergenceReport e = convergence_probe(spec::Euler{}, select::ResidueClass{3, 2}, 64, po);
  const bool e_ok = e.verdict != Verdict::Converging && !e.stabilized_plus(0);
  if (!e_ok) r.pass = false;
  d << "e k=2 " << to_string(e.verdict) << (e.stabilized_plus(0) ? ", offset 0 stable" : ", offset 0 unstable");
  r.detail = d.str();
  return r;
}

CheckResult asymptotic_agreement(Workbench& wb) {
  CheckResult r{10, "asymptotic B_n and C_n", true, {}, 0};
  std::ostringstream d;
  for (const AlphaSpec& s : test_matrix()) {
    std::vector<long double> log_q, log_eb, log_ec;
    const std::vector<std::size_t> idx = wb.indices(s, 9);
    bool tail_ok = true;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const Evaluated& ev = wb.at(s, idx[i]);
      const BnAsymptotic b = b_n_asymptotic(ev.data);
      const CnAsymptotic c = c_n_asymptotic(ev.data);
      const long double eb = std::fabs(b.log_value - ev.point.log_B_n);
      const long double ec = std::fabs(c.value - ev.point.C_n);
      if (i + 2 >= idx.size() && !(eb < 3.0L / b.tau && ec < 3.0L / c.kappa)) tail_ok = false;
      log_q.push_back(std::log(static_cast<long double>(ev.data.q_n)));
      log_eb.push_back(std::log(eb));
      log_ec.push_back(std::log(ec));
    }
    // Trend: the log-log slope of the error against q_n must be negative.
    const long double sb = idx.size() >= 2 ? least_squares(log_q, log_eb).slope : 0;
    const long double sc = idx.size() >= 2 ? least_squares(log_q, log_ec).slope : 0;
    const bool ok = tail_ok && sb < 0 && sc < 0;
    if (!ok) r.pass = false;
    d << to_string(s) << ": last two within 3/tau " << (tail_ok ? "yes" : "NO") << ", slopes " << fmt(sb)
      << '/' << fmt(sc) << "; ";
  }
  r.detail = d.str();
  return r;
}

CheckResult estimator_band(Workbench& wb) {
  CheckResult r{11, "estimator band", true, {}, 0};
  std::ostringstream d;
  for (const AlphaSpec& s : bounded_specs()) {
    long double lo = std::numeric_limits<long double>::infinity(), hi = 0;
    for (std::size_t n : wb.indices(s, 9)) {
      if (n < 6) continue;
      const Evaluated& ev = wb.at(s, n);
      const EstimateReport e = estimate_theorem1(ev.data, ev.point.log_P);
      lo = std::min(lo, e.ratio);
      hi = std::max(hi, e.ratio);
    }
    const long double band = hi / lo;
    if (!(band < 10)) r.pass = false;
    d << to_string(s) << ": ratio in [" << fmt(lo) << ", " << fmt(hi) << "], max/min " << fmt(band) << "; ";
  }
  r.detail = d.str();
  return r;
}

CheckResult figure_reproduction(Workbench& wb) {
  CheckResult r{12, "figure reproduction", true, {}, 0};
  std::ostringstream d;
  for (FigureId id : {FigureId::Fig1a, FigureId::Fig1b, FigureId::Fig2a, FigureId::Fig2b}) {
    const auto t0 = std::chrono::steady_clock::now();
    const FigureData fig = figure_data(id, wb.probe_options());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool nonempty = !fig.series.empty();
    for (const FigureSeries& s : fig.series) nonempty = nonempty && !s.points.empty();
    const bool ok = nonempty && !fig.partial && fig.shape_holds() && secs < 300;
    if (!ok) r.pass = false;
    d << to_string(id) << (ok ? " ok" : " FAIL");
    for (const ShapeCheck& c : fig.checks) {
      if (!c.pass) d << " [" << c.name << ": " << c.detail << "]";
    }
    d << "; ";
  }
  r.detail = d.str();
  return r;
}

}  // namespace

std::vector<CheckResult> run_checks(const CheckOptions& opt,
                                    const std::function<void(const CheckResult&)>& on_result) {
  using Check = CheckResult (*)(Workbench&);
  static constexpr Check kChecks[kCriterionCount] = {
      decomposition_identity, ostrowski_correctness, dt_equivalence,    sine_identity,
      lambda_bounds,         symmetries,       golden_trend,      euler_trichotomy_check,
      probe_examples,      asymptotic_agreement,  estimator_band,     figure_reproduction};
  const char* names[kCriterionCount] = {
      "decomposition identity", "Ostrowski correctness", "D_t closed form equals the direct sum",
      "rational sine-product identity", "|Lambda_n| bounds and c_n = q_n |Lambda_n|", "s/h/xi symmetries",
      "golden ratio plateau", "Euler trichotomy", "convergence probes", "asymptotic B_n and C_n",
      "estimator band", "figure reproduction"};
  Workbench wb(opt);
  std::vector<CheckResult> out;
  for (int i = 0; i < kCriterionCount; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = kChecks[i](wb);
    } catch (const std::exception& ex) {
      r = CheckResult{i + 1, names[i], false, std::string("exception: ") + ex.what(), 0};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_check(const CheckResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << " ("
     << std::fixed;
  os.precision(1);
  os << r.seconds << " s)";
  return os.str();
}

}  // namespace sudler
