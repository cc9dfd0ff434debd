#pragma once

#include "funcspace/function_spec.hpp"

namespace funcspace {
inline namespace functions {

/// Total variation of f over [a, b] as a certified extended value.
///
/// Continuous piecewise-monotone constructors sum |f(p_{i+1}) - f(p_i)| over
/// the monotone decomposition (exact at rational values). Step series sum
/// their jump magnitudes. Functions with a pole inside the range come back
/// ProvenInfinite with a dyadic-approach certificate. Sums of functions
/// whose pieces cannot be sign-aligned return a valid (wider) bracket from
/// the triangle inequality.
ExtendedValue total_variation(const FunctionSpec& f, const Rational& a, const Rational& b);
inline ExtendedValue total_variation(const FuncPtr& f, const Rational& a, const Rational& b) {
  return total_variation(*f, a, b);
}

}  // namespace functions
}  // namespace funcspace
