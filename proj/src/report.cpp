#include "sudler/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace sudler {
namespace {

std::string join_offsets(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string series_spec(const FigureData& fig) {
  return fig.series.empty() ? std::string{} : fig.series.front().spec;
}

}  // namespace

std::string format_ld(long double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  // 18 significant digits round-trip the 64-bit long double mantissa.
  std::snprintf(buf, sizeof buf, "%.18Lg", v);
  return buf;
}

void write_csv_preamble(std::ostream& os, std::string_view spec, unsigned precision_bits) {
  os << "# spec=" << spec << " precision_bits=" << precision_bits << " version=" << kToolVersion
     << '\n';
}

void write_sudler_csv(std::ostream& os, const std::vector<SudlerRow>& rows, unsigned precision_bits) {
  write_csv_preamble(os, rows.empty() ? std::string_view{} : rows.front().spec, precision_bits);
  os << "spec,n,q_n,log_P,A_n,log_B_n,C_n,residual,c_n,S_n,core,ratio,Y_n\n";
  for (const SudlerRow& r : rows) {
    const SudlerPoint& p = r.point;
    os << r.spec << ',' << p.n << ',' << p.q_n << ',' << format_ld(p.log_P) << ',' << format_ld(p.A_n)
       << ',' << format_ld(p.log_B_n) << ',' << format_ld(p.C_n) << ',' << format_ld(p.residual) << ','
       << format_ld(p.c_n) << ',';
    if (r.has_estimate) {
      os << format_ld(r.S_n) << ',' << format_ld(r.core) << ',' << format_ld(r.ratio) << ','
         << format_ld(r.Y_n);
    } else {
      os << ",,,";
    }
    os << '\n';
  }
}

void write_probe_csv(std::ostream& os, const ConvergenceReport& rep, unsigned precision_bits) {
  write_csv_preamble(os, rep.spec, precision_bits);
  os << "# selector=" << rep.selector << '\n';
  os << "i,n_i,q_ni,P,diff,stabilized_offsets_plus,stabilized_offsets_minus,verdict\n";
  for (const ProbeRow& r : rep.rows) {
    os << r.i << ',' << r.n << ',' << r.q_n << ',' << format_ld(r.P) << ',' << format_ld(r.diff) << ','
       << join_offsets(r.stable_plus) << ',' << join_offsets(r.stable_minus) << ',' << to_string(r.verdict)
       << '\n';
  }
  if (rep.partial) os << "# partial: desk bound exceeded at n=" << rep.first_excluded << '\n';
}

void write_figure_csv(std::ostream& os, const FigureData& fig, unsigned precision_bits) {
  write_csv_preamble(os, series_spec(fig), precision_bits);
  os << "# figure=" << to_string(fig.id) << '\n';
  const bool multi = fig.series.size() > 1;
  os << (multi ? "series,n,q_n,P\n" : "n,q_n,P\n");
  for (const FigureSeries& s : fig.series) {
    for (const FigurePoint& p : s.points) {
      if (multi) os << s.label << ',';
      os << p.n << ',' << p.q_n << ',' << format_ld(p.P) << '\n';
    }
  }
  if (fig.partial) os << "# partial: desk bound exceeded\n";
}

void write_figure_svg(std::ostream& os, const FigureData& fig) {
  constexpr double kW = 640, kH = 400, kMargin = 50;
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  double n_min = 1e300, n_max = -1e300, p_min = 1e300, p_max = -1e300;
  for (const FigureSeries& s : fig.series) {
    for (const FigurePoint& p : s.points) {
      n_min = std::min(n_min, static_cast<double>(p.n));
      n_max = std::max(n_max, static_cast<double>(p.n));
      p_min = std::min(p_min, static_cast<double>(p.P));
      p_max = std::max(p_max, static_cast<double>(p.P));
    }
  }
  if (n_min > n_max) n_min = 0, n_max = 1, p_min = 0, p_max = 1;
  if (n_max == n_min) n_max = n_min + 1;
  if (p_max == p_min) p_max = p_min + 1;
  const auto x = [&](double n) { return kMargin + (n - n_min) / (n_max - n_min) * (kW - 2 * kMargin); };
  const auto y = [&](double p) { return kH - kMargin - (p - p_min) / (p_max - p_min) * (kH - 2 * kMargin); };

  char buf[256];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n"
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
                kMargin, kH - kMargin, kW - kMargin, kH - kMargin, kMargin, kMargin, kMargin, kH - kMargin);
  os << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\">n=%g</text><text x=\"%g\" y=\"%g\" text-anchor=\"end\">n=%g</text>\n"
                "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%.4g</text>"
                "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%.4g</text>\n",
                kMargin, kH - kMargin + 15, n_min, kW - kMargin, kH - kMargin + 15, n_max, kMargin - 4,
                kH - kMargin, p_min, kMargin - 4, kMargin + 4, p_max);
  os << buf;
  os << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\">" << to_string(fig.id)
     << ": P_{q_n} against n</text>\n";

  for (std::size_t si = 0; si < fig.series.size(); ++si) {
    const FigureSeries& s = fig.series[si];
    const char* color = kColors[si % 4];
    for (const FigurePoint& p : s.points) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n",
                    x(static_cast<double>(p.n)), y(static_cast<double>(p.P)), color);
      os << buf;
    }
    if (fig.series.size() > 1) {
      std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" fill=\"%s\">%s</text>\n", kW - kMargin - 60,
                    kMargin + 14.0 * static_cast<double>(si), color, s.label.c_str());
      os << buf;
    }
  }
  os << "</svg>\n";
}

}  // namespace sudler
