#include "funcspace/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace funcspace {
inline namespace numerics {

BigInt floor_of(const Rational& r) {
  BigInt q = num(r) / den(r);  // truncates toward zero
  if (r < 0 && q * den(r) != num(r)) --q;
  return q;
}

BigInt ceil_of(const Rational& r) {
  BigInt q = num(r) / den(r);
  if (r > 0 && q * den(r) != num(r)) ++q;
  return q;
}

Rational pow_int(const Rational& base, long long e) {
  if (e == 0) return Rational(1);
  if (base == 0) {
    if (e < 0) throw std::domain_error("pow_int: zero base with negative exponent");
    return Rational(0);
  }
  bool invert = e < 0;
  unsigned long long k = invert ? static_cast<unsigned long long>(-e)
                                : static_cast<unsigned long long>(e);
  Rational acc(1), b = base;
  while (k != 0) {
    if (k & 1ULL) acc *= b;
    b *= b;
    k >>= 1ULL;
  }
  if (invert) acc = Rational(1) / acc;
  return acc;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) {
  std::string s = num(r).str();
  if (den(r) != 1) {
    s += "/";
    s += den(r).str();
  }
  return s;
}

std::optional<Rational> parse_rational(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') {
    neg = s[i] == '-';
    ++i;
  }
  if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
  BigInt n = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    n = n * 10 + (s[i] - '0');
    ++i;
  }
  BigInt d = 1;
  if (i < s.size()) {
    if (s[i] != '/') return std::nullopt;
    ++i;
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    d = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      d = d * 10 + (s[i] - '0');
      ++i;
    }
    if (d == 0) return std::nullopt;
  }
  if (i != s.size()) return std::nullopt;
  Rational r(n, d);
  return neg ? Rational(-r) : r;
}

std::string decimal_string(const Rational& r, int digits) {
  if (digits < 0) digits = 0;
  BigInt scale = 1;
  for (int k = 0; k < digits; ++k) scale *= 10;
  BigInt n = abs(num(r)) * scale * 2 + den(r);  // round half away from zero
  BigInt q = n / (den(r) * 2);
  std::string whole = BigInt(q / scale).str();
  std::string out = (r < 0 && q != 0) ? "-" + whole : whole;
  if (digits > 0) {
    std::string frac = BigInt(q % scale).str();
    out += "." + std::string(static_cast<std::size_t>(digits) - frac.size(), '0') + frac;
  }
  return out;
}

}  // namespace numerics
}  // namespace funcspace
