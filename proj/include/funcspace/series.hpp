#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "funcspace/enclosure.hpp"
#include "funcspace/rational.hpp"

namespace funcspace {
inline namespace numerics {

/// The sequence n |-> c / n^p with c > 0. Exponents are rational; the
/// divergence comparison rule only applies when p <= 1.
struct SeqTerm {
  Rational c;
  Rational p;

  /// Bracket of c / n^p (exact for integer p).
  Enclosure value_at(unsigned long n) const;
  /// Certified rational lower bound of c / n^p.
  Rational lower_at(unsigned long n) const;
};

std::string to_string(const SeqTerm& t);

/// Evidence that a series of per-index lower bounds diverges: the bounds
/// dominate term = c/n^p with p <= 1 from `from_index` on. `checked_prefix`
/// records verified partial-sum lower bounds at supplied indices.
struct DivergenceCertificate {
  SeqTerm term;
  unsigned long from_index = 1;
  std::vector<std::pair<unsigned long, Rational>> checked_prefix;
  std::string note;
};

struct UnknownValue {
  std::string reason;
};

/// A certified extended-real quantity: a finite bracket, a proven-infinite
/// tag with its certificate, or an explicit unknown.
class ExtendedValue {
 public:
  static ExtendedValue finite(Enclosure e) { return ExtendedValue(std::move(e)); }
  static ExtendedValue infinite(DivergenceCertificate c) { return ExtendedValue(std::move(c)); }
  static ExtendedValue unknown(std::string reason) {
    return ExtendedValue(UnknownValue{std::move(reason)});
  }

  bool is_finite() const { return std::holds_alternative<Enclosure>(v_); }
  bool is_infinite() const { return std::holds_alternative<DivergenceCertificate>(v_); }
  bool is_unknown() const { return std::holds_alternative<UnknownValue>(v_); }

  const Enclosure& enclosure() const { return std::get<Enclosure>(v_); }
  const DivergenceCertificate& certificate() const {
    return std::get<DivergenceCertificate>(v_);
  }
  const std::string& reason() const { return std::get<UnknownValue>(v_).reason; }

 private:
  template <class T>
  explicit ExtendedValue(T t) : v_(std::move(t)) {}
  std::variant<Enclosure, DivergenceCertificate, UnknownValue> v_;
};

std::string to_string(const ExtendedValue& v);

/// Sum of finite + finite (bracket addition); infinite absorbs finite;
/// unknown absorbs everything else.
ExtendedValue ev_add(const ExtendedValue& a, const ExtendedValue& b);
ExtendedValue ev_scale(const Rational& r, const ExtendedValue& v);  // r > 0

/// Brackets sum_{n >= from} c/n^p. For p > 1 the bracket is
/// [partial sum to N, partial sum + c*N^(1-p)/(p-1)] with N = from+terms-1
/// (integral-test tail constant). For p <= 1 the sum is proven infinite.
ExtendedValue series_tail(const SeqTerm& term, unsigned long from, unsigned terms = 100);

struct ComparisonRejection {
  std::string reason;
};

/// Fits a comparison term c/n^p (p in {0, 1/2, 1}) under the supplied
/// per-index lower bounds and verifies the domination exactly at every
/// supplied index. Rejects sequences whose log-log decay exceeds 1 (they
/// look summable; no certificate may be issued from them).
std::variant<DivergenceCertificate, ComparisonRejection> divergence_by_comparison(
    const std::vector<std::pair<unsigned long, Rational>>& lower_bounds);

}  // namespace numerics
}  // namespace funcspace
