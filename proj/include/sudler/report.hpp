#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sudler/analysis.hpp"
#include "sudler/sudler.hpp"

namespace sudler {

inline constexpr std::string_view kToolVersion = "sudler-tools 0.1.0";

/// Shortest decimal that round-trips a long double ("%.21Lg"-style but trimmed).
std::string format_ld(long double v);

/// Writes the comment line shared by every CSV:
/// "# spec=<spec> precision_bits=<bits> version=<tool version>".
void write_csv_preamble(std::ostream& os, std::string_view spec, unsigned precision_bits);

struct SudlerRow {
  std::string spec;
  SudlerPoint point;
  long double S_n = 0;
  long double core = 0;
  long double ratio = 0;
  long double Y_n = 0;
  bool has_estimate = false;  ///< estimators need q_n >= 9
};

/// "spec,n,q_n,log_P,A_n,log_B_n,C_n,residual,c_n,S_n,core,ratio,Y_n";
/// estimator columns are empty when has_estimate is false.
void write_sudler_csv(std::ostream& os, const std::vector<SudlerRow>& rows, unsigned precision_bits);

/// "i,n_i,q_ni,P,diff,stabilized_offsets_plus,stabilized_offsets_minus,verdict".
/// Offset lists are ';'-separated. A partial report ends with a "# partial" comment.
void write_probe_csv(std::ostream& os, const ConvergenceReport& rep, unsigned precision_bits);

/// "n,q_n,P", with a leading "series" column when there is more than one series.
void write_figure_csv(std::ostream& os, const FigureData& fig, unsigned precision_bits);

/// Minimal self-contained scatter plot of P against n.
void write_figure_svg(std::ostream& os, const FigureData& fig);

}  // namespace sudler
