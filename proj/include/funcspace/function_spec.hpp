#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "funcspace/errors.hpp"
#include "funcspace/interval_family.hpp"

namespace funcspace {
inline namespace functions {

using numerics::to_string;
using sets::to_string;

struct FunctionSpec;
using FuncPtr = std::shared_ptr<const FunctionSpec>;

/// x |-> a*x + b.
struct Affine {
  Rational a;
  Rational b;
};

/// x |-> |x|^e, optionally times sign(x). The public entry point requires
/// e > 0; other exponents and the sign factor appear internally as a.e.
/// derivatives (e.g. d/dx |x| = sign(x), d/dx 1/x = -|x|^-2).
struct PowerAbs {
  Rational e;
  bool with_sign = false;
};

/// x |-> 1/x, undefined at 0.
struct Reciprocal {};

/// The 2-periodic function equal to sqrt(|x - 2k|) on [2k-1, 2k+1].
struct SqrtPeriodic {};

/// Its a.e. derivative sign(x-2k) / (2 sqrt(|x - 2k|)); undefined at even
/// integers (poles) and at odd integers (corners) — a null set.
struct SqrtPeriodicDeriv {};

/// Sum_n c(n) * indicator([a(n), a(n)+w(n))) over the placement intervals.
/// c(n) is a SeqTerm with integer exponent so every step height is rational;
/// a mirrored placement repeats the same height on the reflected intervals.
struct StepSeries {
  SeqTerm coef;
  TailDescriptor placement;
};

struct Scale {
  Rational r;  // nonzero
  FuncPtr inner;
};

struct SumOf {
  FuncPtr left;
  FuncPtr right;
};

/// Closed catalog of function constructors. Closedness is what keeps the
/// membership questions decidable; the catalog composes under Scale/SumOf.
struct FunctionSpec {
  std::variant<Affine, PowerAbs, Reciprocal, SqrtPeriodic, SqrtPeriodicDeriv, StepSeries,
               Scale, SumOf>
      node;
};

FuncPtr make_affine(const Rational& a, const Rational& b);
/// Public form: e > 0 enforced. Internal derivative forms use make_power_ext.
FuncPtr make_power_abs(const Rational& e);
FuncPtr make_power_ext(const Rational& e, bool with_sign);
FuncPtr make_reciprocal();
FuncPtr make_sqrt_periodic();
FuncPtr make_sqrt_periodic_deriv();
/// Requires disjoint placement and an integer coefficient exponent.
FuncPtr make_step_series(const SeqTerm& coef, const TailDescriptor& placement);
FuncPtr make_scale(const Rational& r, FuncPtr inner);  // r != 0
FuncPtr make_sum(FuncPtr left, FuncPtr right);

/// Canonical text form, mirroring the DSL; parse(to_text(f)) reproduces f.
std::string to_text(const FunctionSpec& f);
std::string to_text(const FuncPtr& f);

/// Structural equality via canonical text.
bool equal_specs(const FuncPtr& a, const FuncPtr& b);

/// Per-constructor constants, composed through Scale and SumOf.
struct CatalogAttributes {
  bool ac_loc = false;
  bool continuity = false;
  bool derivative_known = false;
  std::string ac_loc_why;
};

CatalogAttributes attributes(const FunctionSpec& f);
inline CatalogAttributes attributes(const FuncPtr& f) { return attributes(*f); }

/// Continuity on a specific closed interval: sharper than the global
/// attribute (reciprocal is continuous on pole-free ranges).
bool continuous_on(const FunctionSpec& f, const Rational& a, const Rational& b);

/// Point evaluation. The enclosure contains the true value and is exact
/// whenever the value is rational. Fails with undefined-at-point at poles
/// (reciprocal at 0), corners/poles of the periodic derivative (integers),
/// and sign(0). StepSeries is total (0 off its support).
Result<Enclosure> evaluate(const FunctionSpec& f, const Rational& x);
inline Result<Enclosure> evaluate(const FuncPtr& f, const Rational& x) {
  return evaluate(*f, x);
}

/// The a.e. derivative as a catalog member. StepSeries maps to the zero
/// function; its ac_loc attribute stays false, so the derivative may be
/// integrated but never used to reconstitute f through the fundamental
/// theorem of calculus — classification consults the attribute.
Result<FuncPtr> derivative(const FunctionSpec& f);
inline Result<FuncPtr> derivative(const FuncPtr& f) { return derivative(*f); }

/// Ordered breakpoints p0 < ... < pm with p0 = a, pm = b.
struct Partition {
  std::vector<Rational> points;
};

/// Breakpoints of the monotone decomposition on [a, b]: each summand of f is
/// monotone between consecutive points (for a single continuous constructor
/// f itself is). Fails for step functions and across poles/jumps.
Result<Partition> monotone_breakpoints(const FunctionSpec& f, const Rational& a,
                                       const Rational& b);
inline Result<Partition> monotone_breakpoints(const FuncPtr& f, const Rational& a,
                                              const Rational& b) {
  return monotone_breakpoints(*f, a, b);
}

}  // namespace functions
}  // namespace funcspace
