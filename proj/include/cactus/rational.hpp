#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace cactus {

// Exact rationals. mpq_class keeps values in lowest terms with a positive
// denominator after every arithmetic operation.
using Integer = mpz_class;
using Rational = mpq_class;

struct RationalParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Parses `p`, `-p` or `p/q` (q > 0). Whitespace is not accepted.
Rational parse_rational(std::string_view text);

/// Canonical text form: `p/q` in lowest terms, `p` when q = 1.
std::string to_string(const Rational& x);

/// x mod m for m > 0, result in [0, m).
Rational mod_positive(const Rational& x, const Rational& m);

/// Largest integer <= x.
Integer floor(const Rational& x);

/// Least common multiple of denominators; 1 for an empty range.
template <typename Range>
Integer common_denominator(const Range& values) {
  Integer l = 1;
  for (const Rational& v : values) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  }
  return l;
}

}  // namespace cactus
