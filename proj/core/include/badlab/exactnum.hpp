#pragma once

// Exact scalars and certified enclosures.
//
// Every inequality that decides membership of a lattice point in one of the
// slab sets is evaluated either exactly on rationals or through an enclosure
// that is refined until it excludes the comparand. Nothing here falls back to
// a floating-point guess.

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace badlab {

using Int = mpz_class;
using Rat = mpq_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A precondition of a construction does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An enclosure could not separate two quantities before reaching the
/// precision cap.
class UndecidableError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Rat helpers

/// Builds num/den in canonical form. Throws DomainError when den == 0.
Rat make_rat(const Int& num, const Int& den);

/// Parses "p", "-p", "p/q". Whitespace around the literal is ignored.
/// Decimal or exponent notation is rejected.
Rat parse_rat(std::string_view text);

/// Canonical "p/q" (or "p" when q == 1).
std::string to_string(const Rat& x);
std::string to_string(const Int& x);

bool is_canonical(const Rat& x);

Int floor_int(const Rat& x);
Int ceil_int(const Rat& x);
Rat pow_int(const Rat& base, long exponent);

/// Converts toward the nearest double; only for reporting.
double to_double(const Rat& x);

/// Orders x against y^(p/q) for x, y > 0 and q >= 1 by comparing x^q with
/// y^p in integers.
std::strong_ordering rat_cmp_power(const Rat& x, const Rat& y, long p, unsigned long q);

// ---------------------------------------------------------------------------
// Precision

/// Interval refinement cap in bits. Reads BADLAB_PRECISION_BITS once;
/// defaults to 256.
unsigned max_precision_bits();
void set_max_precision_bits(unsigned bits);

// ---------------------------------------------------------------------------
// HPInterval

/// Closed interval [lo, hi] with dyadic endpoints produced by directed
/// rounding at `precision_bits` bits. A width-zero interval is an exact value.
struct HPInterval {
  Rat lo;
  Rat hi;
  unsigned precision_bits = 0;

  static HPInterval point(const Rat& v, unsigned bits = 0) { return {v, v, bits}; }

  bool is_point() const { return lo == hi; }
  bool contains(const Rat& x) const { return lo <= x && x <= hi; }
  Rat width() const { return hi - lo; }
  Rat midpoint() const { return (lo + hi) / 2; }

  /// Ordering of x against every point of the interval, when uniform.
  std::optional<std::strong_ordering> compare(const Rat& x) const;
};

/// Intersection of two enclosures of the same quantity.
HPInterval refine_with(const HPInterval& coarse, const HPInterval& fine);

/// "[lo,hi]" with both endpoints as canonical rationals; a point prints as
/// the bare rational.
std::string to_string(const HPInterval& x);

}  // namespace badlab
