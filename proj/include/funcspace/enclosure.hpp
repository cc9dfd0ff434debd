#pragma once

#include <optional>
#include <string>

#include "funcspace/rational.hpp"

namespace funcspace {
inline namespace numerics {

/// Certified rational bracket [lo, hi] around a real quantity.
/// `exact` means the quantity is the rational lo == hi.
struct Enclosure {
  Rational lo;
  Rational hi;
  bool exact = false;

  static Enclosure point(const Rational& v) { return Enclosure{v, v, true}; }
  static Enclosure bounds(const Rational& lo, const Rational& hi);

  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool contains(const Enclosure& inner) const { return lo <= inner.lo && inner.hi <= hi; }
  bool intersects(const Enclosure& o) const { return lo <= o.hi && o.lo <= hi; }
};

Enclosure operator+(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a);
/// r * [lo, hi] with sign handled.
Enclosure scale(const Rational& r, const Enclosure& e);
/// Range of |x| for x in e.
Enclosure abs_enclosure(const Enclosure& e);
/// Range of x*y over both enclosures.
Enclosure mul(const Enclosure& a, const Enclosure& b);
/// Reciprocal of an enclosure bounded away from zero.
Enclosure reciprocal(const Enclosure& e);
Enclosure hull(const Enclosure& a, const Enclosure& b);
std::optional<Enclosure> intersection(const Enclosure& a, const Enclosure& b);

/// Rounds outward to denominators 2^bits (or finer where needed to keep a
/// positive lo positive). Caps denominator growth in long pipelines.
Enclosure round_outward(const Enclosure& e, unsigned bits);

Rational default_root_tol();  // 1e-9

/// Bracket of sqrt(r), r >= 0. Exact when r is a perfect rational square
/// (this is what makes e.g. sqrt(1/n^2) come out as the rational 1/n).
Enclosure sqrt_enclosure(const Rational& r, const Rational& tol = default_root_tol());

/// Bracket of r^(1/degree), r >= 0, degree >= 1. Exact on perfect powers.
Enclosure nth_root_enclosure(const Rational& r, unsigned degree,
                             const Rational& tol = default_root_tol());

/// Bracket of base^exponent for rational exponent; base >= 0, and base > 0
/// when exponent < 0.
Enclosure pow_enclosure(const Rational& base, const Rational& exponent,
                        const Rational& tol = default_root_tol());

std::string to_string(const Enclosure& e);

}  // namespace numerics
}  // namespace funcspace
