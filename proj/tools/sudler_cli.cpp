// Command-line front end for the sudler library.
//
// Exit codes: 0 success, 1 tolerance/precision failure, 2 parse error,
// 3 value out of range, 4 partial output at the desk bound.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "sudler/alpha_spec.hpp"
#include "sudler/analysis.hpp"
#include "sudler/checks.hpp"
#include "sudler/errors.hpp"
#include "sudler/ostrowski.hpp"
#include "sudler/report.hpp"
#include "sudler/sudler.hpp"

namespace {

using namespace sudler;

constexpr int kExitTolerance = 1;
constexpr int kExitParse = 2;
constexpr int kExitRange = 3;
constexpr int kExitPartial = 4;

struct Common {
  std::string alpha = "golden";
  unsigned precision_bits = kDefaultPrecisionBits;
  unsigned threads = 0;
  std::string out;
  std::string format = "csv";
};

struct IndexRange {
  std::size_t lo = 0, hi = 0;
};

/// "a..b" or "a".
IndexRange parse_range(const std::string& text) {
  const auto dots = text.find("..");
  const auto number = [&](const std::string& s) -> std::size_t {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (s.empty() || pos != s.size()) throw ParseError("bad index range '" + text + "'");
    return v;
  };
  IndexRange r;
  if (dots == std::string::npos) {
    r.lo = r.hi = number(text);
  } else {
    r.lo = number(text.substr(0, dots));
    r.hi = number(text.substr(dots + 2));
  }
  if (r.lo < 1 || r.hi < r.lo) throw RangeError("index range must satisfy 1 <= a <= b");
  return r;
}

/// Writes to --out when given, else to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App* cmd, Common& c, bool with_alpha = true) {
  if (with_alpha) cmd->add_option("--alpha", c.alpha, "alpha spec (golden, e, quad:pre|period, twos:k, tm:a,b, explicit:...)");
  cmd->add_option("--precision-bits", c.precision_bits, "certified precision in bits")->check(CLI::Range(64u, 1u << 20));
  cmd->add_option("--threads", c.threads, "worker threads (0 = hardware)");
  cmd->add_option("--out", c.out, "output file (default stdout)");
  cmd->add_option("--format", c.format, "csv or csv+svg")->check(CLI::IsMember({"csv", "csv+svg"}));
}

/// Table covering index n and its successor.
ConvergentTable table_for(const AlphaSpec& spec, std::size_t n) { return convergents_until(spec, 0, n + 1); }

int cmd_convergents(const Common& c, std::size_t n) {
  const AlphaSpec spec = parse_alpha_spec(c.alpha);
  if (n < 1) throw RangeError("--n must be >= 1");
  const ConvergentTable t = convergents(expand_cfc(spec, n));
  Output out(c.out);
  std::ostream& os = out.stream();
  write_csv_preamble(os, to_string(spec), c.precision_bits);
  os << "n,a_n,p_n,q_n\n";
  for (std::size_t i = 0; i <= n; ++i) {
    os << i << ',';
    if (i >= 1) os << t.a(i);
    os << ',' << t.p(i).get_str() << ',' << t.q(i).get_str() << '\n';
  }
  return 0;
}

int cmd_ostrowski(const Common& c, std::int64_t t, std::size_t n) {
  const AlphaSpec spec = parse_alpha_spec(c.alpha);
  if (n < 2) throw RangeError("--n must be >= 2 for a nonempty base");
  const OstrowskiBase base = OstrowskiBase::head_of(table_for(spec, n), n);
  const OstrowskiDigits d = ostrowski_encode(t, base);
  Output out(c.out);
  out.stream() << format_digits(d) << '\n';
  return 0;
}

int cmd_dt(const Common& c, std::int64_t t_max, std::size_t n) {
  const AlphaSpec spec = parse_alpha_spec(c.alpha);
  if (n < 2) throw RangeError("--n must be >= 2 for a nonempty base");
  const OstrowskiBase base = OstrowskiBase::head_of(table_for(spec, n), n);
  if (t_max < 1 || t_max >= base.validity_limit()) {
    throw RangeError("--tmax must lie in [1, q_n) = [1, " + std::to_string(base.validity_limit()) + ")");
  }
  const mpq_class beta = base.beta();
  Output out(c.out);
  std::ostream& os = out.stream();
  write_csv_preamble(os, to_string(spec), c.precision_bits);
  os << "# base=" << beta.get_str() << " n=" << n << '\n';
  os << "t,Dt_formula,Dt_bruteforce,N(t)\n";
  int status = 0;
  for (std::int64_t t = 1; t <= t_max; ++t) {
    const mpq_class f = d_t_formula(t, base);
    const mpq_class b = d_t_bruteforce(t, beta);
    if (f != b) status = kExitTolerance;
    os << t << ',' << f.get_str() << ',' << b.get_str() << ',' << ostrowski_encode(t, base).significant_length()
       << '\n';
  }
  if (status) std::cerr << "error: closed form and direct sum disagree\n";
  return status;
}

void warn_partial(std::size_t n, std::uint64_t bound) {
  std::cerr << "warning: q_" << n << " exceeds the desk bound " << bound << "; output is partial\n";
}

int cmd_sudler(const Common& c, const IndexRange& range, std::uint64_t desk_bound) {
  const AlphaSpec spec = parse_alpha_spec(c.alpha);
  const std::string spec_str = to_string(spec);
  std::vector<SudlerRow> rows;
  int status = 0;
  for (std::size_t n = range.lo; n <= range.hi; ++n) {
    const ConvergentTable t = table_for(spec, n);
    if (t.q(n) > mpz_class(static_cast<unsigned long>(desk_bound))) {
      warn_partial(n, desk_bound);
      status = kExitPartial;
      break;
    }
    const IndexData d = index_data(spec, n, c.precision_bits);
    SudlerRow row;
    row.spec = spec_str;
    row.point = decompose(d, c.threads);
    if (d.q_n >= 9) {
      const EstimateReport e = estimate_theorem1(d, row.point.log_P);
      row.S_n = e.S_n;
      row.core = e.core;
      row.ratio = e.ratio;
      row.Y_n = e.Y_n;
      row.has_estimate = true;
    }
    if (!(row.point.residual < kDecompositionTolerance)) {
      std::cerr << "error: residual " << format_ld(row.point.residual) << " at n=" << n << " exceeds tolerance\n";
      if (status == 0) status = kExitTolerance;
    }
    rows.push_back(std::move(row));
  }
  Output out(c.out);
  write_sudler_csv(out.stream(), rows, c.precision_bits);
  return status;
}

int cmd_decompose(const Common& c, const IndexRange& range, std::uint64_t desk_bound) {
  const AlphaSpec spec = parse_alpha_spec(c.alpha);
  Output out(c.out);
  std::ostream& os = out.stream();
  write_csv_preamble(os, to_string(spec), c.precision_bits);
  os << "n,q_n,log_P,A_n,log_A_n,log_B_n,C_n,log_C_n,residual,log_B_star,theta_n,bstar_within_bound\n";
  int status = 0;
  for (std::size_t n = range.lo; n <= range.hi; ++n) {
    if (table_for(spec, n).q(n) > mpz_class(static_cast<unsigned long>(desk_bound))) {
      warn_partial(n, desk_bound);
      status = kExitPartial;
      break;
    }
    const IndexData d = index_data(spec, n, c.precision_bits);
    const SudlerPoint p = decompose(d, c.threads);
    os << n << ',' << p.q_n << ',' << format_ld(p.log_P) << ',' << format_ld(p.A_n) << ',' << format_ld(p.log_A_n)
       << ',' << format_ld(p.log_B_n) << ',' << format_ld(p.C_n) << ',' << format_ld(p.log_C_n) << ','
       << format_ld(p.residual) << ',';
    if (d.q_n >= 3) {
      const BnStarReport b = bn_star(d, p.log_B_n, c.threads);
      os << format_ld(b.log_B_star) << ',' << format_ld(b.theta) << ',' << (b.within_bound ? 1 : 0);
    } else {
      os << ",,";
    }
    os << '\n';
    if (!(p.residual < kDecompositionTolerance) && status == 0) status = kExitTolerance;
  }
  return status;
}

int cmd_estimate(const Common& c, const IndexRange& range, std::uint64_t tau, std::uint64_t kappa,
                 std::uint64_t desk_bound) {
  const AlphaSpec spec = parse_alpha_spec(c.alpha);
  Output out(c.out);
  std::ostream& os = out.stream();
  write_csv_preamble(os, to_string(spec), c.precision_bits);
  os << "n,q_n,a_n,c_n,S_n,core,P,ratio,Y_n,y_estimate,theorem_exponent,y_exponent,tau_n,log_B_asym,log_B_n,"
        "kappa_n,C_asym,C_n\n";
  int status = 0;
  for (std::size_t n = range.lo; n <= range.hi; ++n) {
    const ConvergentTable t = table_for(spec, n);
    if (t.q(n) > mpz_class(static_cast<unsigned long>(desk_bound))) {
      warn_partial(n, desk_bound);
      status = kExitPartial;
      break;
    }
    if (t.q(n) < 9) {
      std::cerr << "note: skipping n=" << n << " (estimators need q_n >= 9)\n";
      continue;
    }
    const IndexData d = index_data(spec, n, c.precision_bits);
    // Overrides up to 4 sqrt(q_n) are accepted; beyond the default they leave
    // the regime in which the remainder estimates apply.
    const std::uint64_t cap = 4 * d.params().tau_n;
    if (tau > cap || kappa > cap) {
      throw RangeError("--tau/--kappa must not exceed 4 sqrt(q_n) = " + std::to_string(cap) + " at n=" +
                       std::to_string(n));
    }
    const SudlerPoint p = decompose(d, c.threads);
    const EstimateReport e = estimate_theorem1(d, p.log_P);
    const BnAsymptotic b = b_n_asymptotic(d, tau);
    const CnAsymptotic ca = c_n_asymptotic(d, kappa);
    os << n << ',' << d.q_n << ',' << d.a_n << ',' << format_ld(e.c_n) << ',' << format_ld(e.S_n) << ','
       << format_ld(e.core) << ',' << format_ld(p.P()) << ',' << format_ld(e.ratio) << ',' << format_ld(e.Y_n)
       << ',' << format_ld(e.y_estimate) << ',' << format_ld(e.theorem_exponent) << ','
       << format_ld(e.y_exponent) << ',' << b.tau << ',' << format_ld(b.log_value) << ','
       << format_ld(p.log_B_n) << ',' << ca.kappa << ',' << format_ld(ca.value) << ',' << format_ld(p.C_n)
       << '\n';
  }
  return status;
}

int cmd_probe(const Common& c, const std::string& selector, std::size_t i_max, std::uint64_t desk_bound) {
  const AlphaSpec spec = parse_alpha_spec(c.alpha);
  SubsequenceSelector sel = parse_selector(selector);
  // A bare "twos" follows the twos of the spec itself.
  if (const auto* rule = std::get_if<spec::TwosRule>(&spec); rule && selector == "twos") {
    sel = select::TwosPositions{static_cast<std::size_t>(rule->start_index)};
  }
  const ConvergenceReport rep =
      convergence_probe(spec, sel, i_max, {c.precision_bits, c.threads, desk_bound});
  Output out(c.out);
  write_probe_csv(out.stream(), rep, c.precision_bits);
  std::cerr << "verdict: " << to_string(rep.verdict) << (rep.fully_stabilized() ? " (coefficients stabilized)" : "")
            << '\n';
  if (rep.partial && rep.rows.size() < i_max) {
    std::cerr << "warning: stopped at n=" << rep.first_excluded << " (q_n above the desk bound); output is partial\n";
    return kExitPartial;
  }
  return 0;
}

std::string svg_path_for(const std::string& csv_path) {
  const auto dot = csv_path.rfind('.');
  const auto slash = csv_path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return csv_path + ".svg";
  return csv_path.substr(0, dot) + ".svg";
}

int cmd_figure(const Common& c, const std::string& id_text, std::uint64_t desk_bound) {
  const FigureId id = parse_figure_id(id_text);
  if (c.format == "csv+svg" && c.out.empty()) throw ParseError("--format csv+svg requires --out");
  const FigureData fig = figure_data(id, {c.precision_bits, c.threads, desk_bound});
  {
    Output out(c.out);
    write_figure_csv(out.stream(), fig, c.precision_bits);
  }
  if (c.format == "csv+svg") {
    std::ofstream svg(svg_path_for(c.out));
    if (!svg) throw std::runtime_error("cannot open " + svg_path_for(c.out));
    write_figure_svg(svg, fig);
  }
  for (const ShapeCheck& s : fig.checks) {
    std::cerr << (s.pass ? "shape ok: " : "shape FAILS: ") << s.name << " (" << s.detail << ")\n";
  }
  if (fig.partial) {
    std::cerr << "warning: desk bound reached; figure data is partial\n";
    return kExitPartial;
  }
  return 0;
}

int cmd_selfcheck(const Common& c, bool quick) {
  CheckOptions opt;
  opt.precision_bits = c.precision_bits;
  opt.threads = c.threads;
  if (quick) opt.q_bound = 100'000;
  Output out(c.out);
  std::ostream& os = out.stream();
  bool all = true;
  run_checks(opt, [&](const CheckResult& r) {
    os << format_check(r) << std::endl;
    all = all && r.pass;
  });
  return all ? 0 : kExitTolerance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sudler products along continued-fraction denominators"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Common c;
  std::size_t n = 1;
  std::string n_range;
  std::int64_t t = 0, t_max = 0;
  std::uint64_t desk_bound = kDeskBound, tau = 0, kappa = 0;
  std::string selector = "residue:1,0", figure_id;
  std::size_t i_max = 64;
  bool quick = false;

  auto* conv = app.add_subcommand("convergents", "a_n, p_n, q_n for n = 0..N");
  add_common(conv, c);
  conv->add_option("--n", n, "largest index")->required();

  auto* ost = app.add_subcommand("ostrowski", "Ostrowski digits of t in base alpha_n^-");
  add_common(ost, c);
  ost->add_option("--t", t, "integer 0 <= t < q_n")->required();
  ost->add_option("--n", n, "index of the base")->required();

  auto* dt = app.add_subcommand("dt", "D_t(alpha_n^-) by closed form and by direct summation");
  add_common(dt, c);
  dt->add_option("--tmax", t_max, "largest t (< q_n)")->required();
  dt->add_option("--n", n, "index of the base")->required();

  const auto add_range = [&](CLI::App* cmd) {
    auto* single = cmd->add_option("--n", n_range, "single index");
    auto* many = cmd->add_option("--n-range", n_range, "index range a..b");
    single->excludes(many);
    cmd->add_option("--desk-bound", desk_bound, "largest q_n evaluated");
  };
  auto* sud = app.add_subcommand("sudler", "P_{q_n} with decomposition and estimator columns");
  add_common(sud, c);
  add_range(sud);
  auto* dec = app.add_subcommand("decompose", "A_n B_n C_n decomposition with B_n^* diagnostics");
  add_common(dec, c);
  add_range(dec);
  auto* est = app.add_subcommand("estimate", "asymptotic estimators against the exact factors");
  add_common(est, c);
  add_range(est);
  est->add_option("--tau", tau, "truncation of the B_n double sum (default floor(sqrt(q_n)))");
  est->add_option("--kappa", kappa, "truncation of the C_n product (default floor(sqrt(q_n)))");

  auto* probe = app.add_subcommand("probe", "convergence probe along a subsequence");
  add_common(probe, c);
  probe->add_option("--select", selector, "residue:L,K | twos[:S] | pow4 | explicit:n1,n2,...");
  probe->add_option("--imax", i_max, "number of subsequence points");
  probe->add_option("--desk-bound", desk_bound, "largest q_n evaluated");

  auto* fig = app.add_subcommand("figure", "figure data (fig1a, fig1b, fig2a, fig2b)");
  add_common(fig, c, false);
  fig->add_option("id", figure_id, "figure id")->required();
  fig->add_option("--desk-bound", desk_bound, "largest q_n evaluated");

  auto* self = app.add_subcommand("selfcheck", "run the invariant suite and print a pass/fail table");
  add_common(self, c, false);
  self->add_flag("--quick", quick, "restrict to q_n <= 1e5");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    const auto range = [&] {
      if (n_range.empty()) throw ParseError("one of --n or --n-range is required");
      return parse_range(n_range);
    };
    if (*conv) return cmd_convergents(c, n);
    if (*ost) return cmd_ostrowski(c, t, n);
    if (*dt) return cmd_dt(c, t_max, n);
    if (*sud) return cmd_sudler(c, range(), desk_bound);
    if (*dec) return cmd_decompose(c, range(), desk_bound);
    if (*est) return cmd_estimate(c, range(), tau, kappa, desk_bound);
    if (*probe) return cmd_probe(c, selector, i_max, desk_bound);
    if (*fig) return cmd_figure(c, figure_id, desk_bound);
    if (*self) return cmd_selfcheck(c, quick);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const RangeError& e) {
    std::cerr << "range error: " << e.what() << '\n';
    return kExitRange;
  } catch (const DeskBoundError& e) {
    std::cerr << "desk bound: " << e.what() << '\n';
    return kExitPartial;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitTolerance;
  }
  return 0;
}
