#include "funcspace/series.hpp"

#include <cmath>

#include "funcspace/errors.hpp"

namespace funcspace {
inline namespace numerics {

Enclosure SeqTerm::value_at(unsigned long n) const {
  if (n == 0) throw DomainError("SeqTerm: index must be >= 1");
  if (den(p) == 1) {
    long long pe = num(p).convert_to<long long>();
    return Enclosure::point(c * pow_int(Rational(n), -pe));
  }
  Enclosure np = pow_enclosure(Rational(n), -p);
  return scale(c, np);
}

Rational SeqTerm::lower_at(unsigned long n) const { return value_at(n).lo; }

std::string to_string(const SeqTerm& t) {
  if (t.p == 0) return to_string(t.c);
  if (t.p < 0) {  // growing sequence c * n^k
    Rational k = -t.p;
    std::string var = k == 1 ? "n" : "n^" + to_string(k);
    return t.c == 1 ? var : to_string(t.c) + "*" + var;
  }
  std::string s = to_string(t.c) + "/n";
  if (t.p != 1) s += "^" + to_string(t.p);
  return s;
}

std::string to_string(const ExtendedValue& v) {
  if (v.is_finite()) return to_string(v.enclosure());
  if (v.is_infinite()) return "infinite (>= sum " + to_string(v.certificate().term) + ")";
  return "unknown: " + v.reason();
}

ExtendedValue ev_add(const ExtendedValue& a, const ExtendedValue& b) {
  if (a.is_unknown()) return a;
  if (b.is_unknown()) return b;
  if (a.is_infinite()) return a;
  if (b.is_infinite()) return b;
  return ExtendedValue::finite(a.enclosure() + b.enclosure());
}

ExtendedValue ev_scale(const Rational& r, const ExtendedValue& v) {
  if (r <= 0) throw DomainError("ev_scale: factor must be positive");
  if (!v.is_finite()) {
    if (v.is_infinite()) {
      DivergenceCertificate c = v.certificate();
      c.term.c *= r;
      for (auto& [i, s] : c.checked_prefix) s *= r;
      return ExtendedValue::infinite(std::move(c));
    }
    return v;
  }
  return ExtendedValue::finite(scale(r, v.enclosure()));
}

ExtendedValue series_tail(const SeqTerm& term, unsigned long from, unsigned terms) {
  if (term.c <= 0) throw DomainError("series_tail: coefficient must be positive");
  if (from == 0) throw DomainError("series_tail: from must be >= 1");
  if (term.p <= 1) {
    DivergenceCertificate cert;
    cert.term = term;
    cert.from_index = from;
    Rational partial = 0;
    for (unsigned long n = from; n < from + 5; ++n) {
      partial += term.lower_at(n);
      cert.checked_prefix.emplace_back(n, partial);
    }
    cert.note = "comparison with sum of " + to_string(term) + " (p <= 1)";
    return ExtendedValue::infinite(std::move(cert));
  }
  if (terms == 0) terms = 1;
  unsigned long N = from + terms - 1;
  Enclosure partial = Enclosure::point(Rational(0));
  for (unsigned long n = from; n <= N; ++n) partial = partial + term.value_at(n);
  // Tail after N bounded above by c * N^(1-p) / (p-1) (integral test).
  Enclosure tail_hi = scale(term.c / (term.p - 1), pow_enclosure(Rational(N), 1 - term.p));
  return ExtendedValue::finite(Enclosure{partial.lo, partial.hi + tail_hi.hi, false});
}

namespace {

// Least-squares slope of -ln(v) against ln(n); estimates the decay exponent.
double decay_slope(const std::vector<std::pair<unsigned long, Rational>>& bounds) {
  if (bounds.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double m = static_cast<double>(bounds.size());
  for (const auto& [n, v] : bounds) {
    double x = std::log(static_cast<double>(n));
    double y = -std::log(to_double(v));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = m * sxx - sx * sx;
  if (denom == 0) return 0.0;
  return (m * sxy - sx * sy) / denom;
}

}  // namespace

std::variant<DivergenceCertificate, ComparisonRejection> divergence_by_comparison(
    const std::vector<std::pair<unsigned long, Rational>>& lower_bounds) {
  if (lower_bounds.empty()) throw DomainError("divergence_by_comparison: empty input");
  unsigned long prev = 0;
  for (const auto& [n, v] : lower_bounds) {
    if (n <= prev) throw DomainError("divergence_by_comparison: indices must increase");
    prev = n;
    if (v <= 0)
      return ComparisonRejection{"nonpositive bound at index " + std::to_string(n)};
  }

  double slope = decay_slope(lower_bounds);
  if (slope > 1.05)
    return ComparisonRejection{
        "bounds decay faster than 1/n (fitted exponent > 1); series looks summable"};

  Rational p;
  if (slope <= 0.05)
    p = 0;
  else if (slope <= 0.55)
    p = Rational(1, 2);
  else
    p = 1;

  // Largest c with v_n >= c/n^p at every supplied index, verified exactly
  // (for p = 1/2 via the squared comparison v^2 * n >= c^2).
  Rational c;
  if (p == 0) {
    c = lower_bounds.front().second;
    for (const auto& [n, v] : lower_bounds) c = std::min(c, v);
  } else if (p == 1) {
    c = lower_bounds.front().second * lower_bounds.front().first;
    for (const auto& [n, v] : lower_bounds) c = std::min(c, Rational(v * n));
  } else {
    Rational c2 = lower_bounds.front().second * lower_bounds.front().second *
                  lower_bounds.front().first;
    for (const auto& [n, v] : lower_bounds) c2 = std::min(c2, Rational(v * v * n));
    c = sqrt_enclosure(c2).lo;
  }
  if (c <= 0) return ComparisonRejection{"no positive comparison coefficient"};

  SeqTerm term{c, p};
  for (const auto& [n, v] : lower_bounds) {
    bool ok = p == Rational(1, 2) ? v * v * n >= c * c : v >= term.lower_at(n);
    if (!ok)
      return ComparisonRejection{"domination check failed at index " + std::to_string(n)};
  }

  DivergenceCertificate cert;
  cert.term = term;
  cert.from_index = lower_bounds.front().first;
  Rational partial = 0;
  for (const auto& [n, v] : lower_bounds) {
    partial += v;
    cert.checked_prefix.emplace_back(n, partial);
  }
  cert.note = "bounds dominate " + to_string(term) + " from index " +
              std::to_string(cert.from_index);
  return cert;
}

}  // namespace numerics
}  // namespace funcspace
