#include "funcspace/enclosure.hpp"

#include <algorithm>
#include <cmath>

#include "funcspace/errors.hpp"

namespace funcspace {
inline namespace numerics {

Enclosure Enclosure::bounds(const Rational& lo, const Rational& hi) {
  if (lo > hi) throw DomainError("Enclosure: lo > hi");
  return Enclosure{lo, hi, lo == hi};
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) {
  return Enclosure{a.lo + b.lo, a.hi + b.hi, a.exact && b.exact};
}

Enclosure operator-(const Enclosure& a, const Enclosure& b) {
  return Enclosure{a.lo - b.hi, a.hi - b.lo, a.exact && b.exact};
}

Enclosure operator-(const Enclosure& a) { return Enclosure{-a.hi, -a.lo, a.exact}; }

Enclosure scale(const Rational& r, const Enclosure& e) {
  if (r >= 0) return Enclosure{r * e.lo, r * e.hi, e.exact};
  return Enclosure{r * e.hi, r * e.lo, e.exact};
}

Enclosure abs_enclosure(const Enclosure& e) {
  if (e.lo >= 0) return e;
  if (e.hi <= 0) return -e;
  return Enclosure{Rational(0), std::max(Rational(-e.lo), e.hi), false};
}

Enclosure mul(const Enclosure& a, const Enclosure& b) {
  Rational c1 = a.lo * b.lo, c2 = a.lo * b.hi, c3 = a.hi * b.lo, c4 = a.hi * b.hi;
  return Enclosure{std::min({c1, c2, c3, c4}), std::max({c1, c2, c3, c4}),
                   a.exact && b.exact};
}

Enclosure reciprocal(const Enclosure& e) {
  if (e.lo <= 0 && e.hi >= 0) throw DomainError("reciprocal: enclosure straddles zero");
  return Enclosure{Rational(1) / e.hi, Rational(1) / e.lo, e.exact};
}

Enclosure hull(const Enclosure& a, const Enclosure& b) {
  Enclosure h{std::min(a.lo, b.lo), std::max(a.hi, b.hi), false};
  h.exact = a.exact && b.exact && h.lo == h.hi;
  return h;
}

std::optional<Enclosure> intersection(const Enclosure& a, const Enclosure& b) {
  if (!a.intersects(b)) return std::nullopt;
  Enclosure r{std::max(a.lo, b.lo), std::min(a.hi, b.hi), false};
  r.exact = r.lo == r.hi;
  return r;
}

Enclosure round_outward(const Enclosure& e, unsigned bits) {
  if (e.exact) return e;
  BigInt step = BigInt(1) << bits;
  // Keep a positive lower bound positive (and a negative upper bound
  // negative): refine the grid until the rounded endpoint keeps its sign.
  auto down = [&](const Rational& v) {
    BigInt s = step;
    Rational r(floor_of(v * Rational(s)), s);
    while (v > 0 && r <= 0) {
      s <<= 8;
      r = Rational(floor_of(v * Rational(s)), s);
    }
    return r;
  };
  auto up = [&](const Rational& v) {
    BigInt s = step;
    Rational r(ceil_of(v * Rational(s)), s);
    while (v < 0 && r >= 0) {
      s <<= 8;
      r = Rational(ceil_of(v * Rational(s)), s);
    }
    return r;
  };
  return Enclosure{down(e.lo), up(e.hi), false};
}

Rational default_root_tol() { return Rational(1, 1000000000); }

namespace {

// Floor of the degree-th root of a nonnegative integer.  Binary search seeded
// from the bit length: a double-based seed overflows past ~9.2e18, and even a
// finite seed is off by ~root*1e-15 absolute, so +/-1 correction cannot be
// bounded for large inputs.
BigInt iroot(const BigInt& x, unsigned degree) {
  if (x <= 1 || degree == 1) return x;
  auto powi = [&](const BigInt& b) {
    BigInt acc = 1;
    for (unsigned k = 0; k < degree; ++k) acc *= b;
    return acc;
  };
  unsigned bits = boost::multiprecision::msb(x) + 1;
  BigInt lo = 0;
  BigInt hi = BigInt(1) << (bits / degree + 1);  // hi^degree >= 2^(bits+1) > x
  while (lo + 1 < hi) {
    BigInt mid = (lo + hi) / 2;
    if (powi(mid) <= x)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

Rational rational_from_double(double d) { return Rational(d); }

}  // namespace

Enclosure sqrt_enclosure(const Rational& r, const Rational& tol) {
  if (r < 0) throw DomainError("sqrt_enclosure: negative argument");
  if (r == 0) return Enclosure::point(Rational(0));
  BigInt sn = sqrt(num(r)), sd = sqrt(den(r));
  if (sn * sn == num(r) && sd * sd == den(r)) return Enclosure::point(Rational(sn, sd));

  // Newton from a double seed; (s + r/s)/2 >= sqrt(r) for any s > 0, so the
  // iterate is always a certified upper bound and r/u a lower bound.  When r
  // overflows double, fall back to a power-of-two bound read off bit lengths.
  double rd = to_double(r);
  double seed = std::isfinite(rd) ? std::sqrt(rd) : 0.0;
  Rational u;
  if (std::isfinite(seed) && seed > 0) {
    u = rational_from_double(seed);
  } else {
    long spread = static_cast<long>(boost::multiprecision::msb(num(r))) -
                  static_cast<long>(boost::multiprecision::msb(den(r)));
    if (spread < 0) spread = 0;
    u = Rational(BigInt(1) << (spread / 2 + 1));
  }
  if (u <= 0) u = Rational(1);
  u = (u + r / u) / 2;
  Rational l = r / u;
  while (u - l > tol) {
    u = (u + r / u) / 2;
    l = r / u;
  }
  return round_outward(Enclosure{l, u, false}, 40);
}

Enclosure nth_root_enclosure(const Rational& r, unsigned degree, const Rational& tol) {
  if (degree == 0) throw DomainError("nth_root_enclosure: degree must be >= 1");
  if (r < 0) throw DomainError("nth_root_enclosure: negative argument");
  if (degree == 1) return Enclosure::point(r);
  if (degree == 2) return sqrt_enclosure(r, tol);
  if (r == 0) return Enclosure::point(Rational(0));
  BigInt rn = iroot(num(r), degree), rd = iroot(den(r), degree);
  auto powi = [&](const BigInt& b) {
    BigInt acc = 1;
    for (unsigned k = 0; k < degree; ++k) acc *= b;
    return acc;
  };
  if (powi(rn) == num(r) && powi(rd) == den(r)) return Enclosure::point(Rational(rn, rd));

  auto powq = [&](const Rational& b) { return pow_int(b, degree); };
  double rdbl = to_double(r);
  double seed = std::isfinite(rdbl) ? std::pow(rdbl, 1.0 / degree) : 0.0;
  Rational l(0), u;
  if (std::isfinite(seed) && seed > 0) {
    l = rational_from_double(seed * 0.999999);
    u = rational_from_double(seed * 1.000001 + 1e-12);
    if (l < 0) l = 0;
    if (u <= 0) u = Rational(1);
  } else {
    // r overflows double: seed the upper bound from bit lengths instead.
    long spread = static_cast<long>(boost::multiprecision::msb(num(r))) -
                  static_cast<long>(boost::multiprecision::msb(den(r)));
    if (spread < 0) spread = 0;
    u = Rational(BigInt(1) << (spread / static_cast<long>(degree) + 1));
  }
  while (powq(l) > r) l /= 2;
  while (powq(u) < r) u *= 2;
  while (u - l > tol) {
    Rational m = (l + u) / 2;
    if (powq(m) <= r)
      l = m;
    else
      u = m;
  }
  return round_outward(Enclosure{l, u, false}, 40);
}

Enclosure pow_enclosure(const Rational& base, const Rational& exponent, const Rational& tol) {
  if (base < 0) throw DomainError("pow_enclosure: negative base");
  if (exponent == 0) return Enclosure::point(Rational(1));
  if (base == 0) {
    if (exponent < 0) throw DomainError("pow_enclosure: zero base, negative exponent");
    return Enclosure::point(Rational(0));
  }
  long long p = num(exponent).convert_to<long long>();
  unsigned long long q = den(exponent).convert_to<unsigned long long>();
  Rational powered = pow_int(base, p);
  return nth_root_enclosure(powered, static_cast<unsigned>(q), tol);
}

std::string to_string(const Enclosure& e) {
  if (e.exact) return to_string(e.lo);
  return "[" + to_string(e.lo) + ", " + to_string(e.hi) + "]";
}

}  // namespace numerics
}  // namespace funcspace
