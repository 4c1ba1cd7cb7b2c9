#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sudler {

using Coefficient = std::int64_t;

/// Generator descriptions of an irrational alpha = [0; a_1, a_2, ...] in (0,1).
/// Every generator yields coefficients a_i >= 1 for all i >= 1.
namespace spec {

/// a_i = preperiod[i-1] for i <= |preperiod|, then the period repeats.
struct Periodic {
  std::vector<Coefficient> preperiod;
  std::vector<Coefficient> period;
  bool operator==(const Periodic&) const = default;
};

/// Fractional part of e: [0; 1,2,1, 1,4,1, 1,6,1, ...].
struct Euler {
  bool operator==(const Euler&) const = default;
};

/// All ones except a 2 at n_1 = start_index, n_i = n_{i-1} + i + 1.
struct TwosRule {
  Coefficient start_index = 1;
  bool operator==(const TwosRule&) const = default;
};

/// a_n = t_{n-1} of the Thue-Morse word over {a, b}.
struct ThueMorse {
  Coefficient a = 1;
  Coefficient b = 2;
  bool operator==(const ThueMorse&) const = default;
};

/// Finite explicit prefix followed by tail_fill forever.
struct Explicit {
  std::vector<Coefficient> digits;
  Coefficient tail_fill = 1;
  bool operator==(const Explicit&) const = default;
};

}  // namespace spec

using AlphaSpec =
    std::variant<spec::Periodic, spec::Euler, spec::TwosRule, spec::ThueMorse, spec::Explicit>;

/// Coefficient a_index (1-based) of the expansion described by `s`.
Coefficient coefficient_at(const AlphaSpec& s, std::size_t index);

/// a_1..a_count.
std::vector<Coefficient> expand_cfc(const AlphaSpec& s, std::size_t count);

/// True when every coefficient is bounded (all kinds except Euler).
bool has_bounded_coefficients(const AlphaSpec& s);

/// Parses the alpha-spec DSL:
///   golden | e | quad:<pre>|<period> | twos:<start> | tm:<a>,<b> |
///   explicit:<d1,d2,...>;fill=<k>
/// Throws ParseError on malformed input.
AlphaSpec parse_alpha_spec(std::string_view text);

/// Canonical DSL string; parse_alpha_spec(to_string(s)) == s.
std::string to_string(const AlphaSpec& s);

/// Memoized coefficient stream for one spec. Not synchronized: confine an
/// instance to a single thread.
class CoefficientCache {
 public:
  explicit CoefficientCache(AlphaSpec s) : spec_(std::move(s)) {}

  const AlphaSpec& spec() const { return spec_; }

  /// a_index, 1-based.
  Coefficient at(std::size_t index);

  /// a_1..a_count; always a prefix of any longer request.
  std::vector<Coefficient> prefix(std::size_t count);

 private:
  void extend_to(std::size_t count);

  AlphaSpec spec_;
  std::vector<Coefficient> memo_;
};

}  // namespace sudler
