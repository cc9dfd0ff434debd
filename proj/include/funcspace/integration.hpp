#pragma once

#include <utility>
#include <vector>

#include "funcspace/function_spec.hpp"

namespace funcspace {
inline namespace functions {

/// Tuning knobs for the certified integration routines.
struct RefineOpts {
  /// Tolerance for irrational antiderivative endpoint values (roots).
  Rational root_tol = default_root_tol();
  /// Target bracket width for Riemann-bracketed pieces (reciprocal-like
  /// integrands without a rational antiderivative).
  Rational riemann_target = Rational(1, 1 << 20);
  /// Hard cap on Riemann subdivisions per interval.
  unsigned long riemann_cap = 1ul << 20;
  /// Bisection depth for sign-resolving sums of functions.
  unsigned max_splits = 12;
};

/// Certified bracket of the integral of |f| over one bounded interval.
/// ProvenInfinite when a non-integrable pole sits in the interval (dyadic
/// shell certificate); never Unknown for single constructors.
ExtendedValue integral_abs_on_interval(const FunctionSpec& f, const Interval& iv,
                                       const RefineOpts& opts = {});
inline ExtendedValue integral_abs_on_interval(const FuncPtr& f, const Interval& iv,
                                              const RefineOpts& opts = {}) {
  return integral_abs_on_interval(*f, iv, opts);
}

/// Integral of |f| over a family, with a partial-sum ledger for the
/// symbolic tail: entry (n, s) certifies integral over tail blocks up to
/// index n is at least s (exact rational lower bounds).
struct IntegralResult {
  ExtendedValue value = ExtendedValue::unknown("not computed");
  std::vector<std::pair<unsigned long, Rational>> ledger;
};

/// Head intervals integrate directly; tail blocks are materialized up to
/// `depth` indices and then either (a) proven divergent by comparison,
/// (b) closed by a recognized tail bound (periodic-sqrt derivative over
/// even-aligned blocks, step series over their own placement, bounded
/// integrands), or (c) left Unknown. Rays use per-constructor shell
/// arguments.
IntegralResult integral_abs_over(const FunctionSpec& f, const IntervalFamily& fam,
                                 unsigned long depth = 100, const RefineOpts& opts = {});
inline IntegralResult integral_abs_over(const FuncPtr& f, const IntervalFamily& fam,
                                        unsigned long depth = 100,
                                        const RefineOpts& opts = {}) {
  return integral_abs_over(*f, fam, depth, opts);
}

}  // namespace functions
}  // namespace funcspace
