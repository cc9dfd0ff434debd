#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace funcspace {
inline namespace numerics {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number. The backing type keeps the canonical reduced form
/// (gcd(|num|, den) = 1, den > 0) after every operation.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& r) { return numerator(r); }
inline BigInt den(const Rational& r) { return denominator(r); }

inline Rational rat(long long n, long long d = 1) { return Rational(n, d); }

inline int sign_of(const Rational& r) { return r.sign(); }

inline Rational abs_of(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// Largest integer <= r.
BigInt floor_of(const Rational& r);
/// Smallest integer >= r.
BigInt ceil_of(const Rational& r);

/// base^e with integer exponent; base must be nonzero when e < 0.
Rational pow_int(const Rational& base, long long e);

double to_double(const Rational& r);

/// "a/b" when den > 1, otherwise "a".
std::string to_string(const Rational& r);

/// Accepts "a" or "a/b" with optional leading sign; b > 0 required.
std::optional<Rational> parse_rational(std::string_view s);

/// Exact decimal rendering with `digits` fractional digits, round half away
/// from zero. Deterministic; used anywhere a report needs a readable value.
std::string decimal_string(const Rational& r, int digits);

}  // namespace numerics
}  // namespace funcspace
