#pragma once

/// Surface syntax for the function catalog and interval families.
///
/// The grammar is a small constructor language with no arithmetic on x:
///
///   expr     := name "(" args ")" | name
///   args     := arg ("," arg)*
///   arg      := key "=" value | value
///   value    := rational | seqterm | expr | flag
///   seqterm  := rational | rational "/n" ["^" rational] | [rational "*"] "n" ["^" rational]
///   set      := "{" piece* "}" ["++" tail]
///   piece    := ("["|"(") endpoint "," endpoint (")"|"]")
///   tail     := "tail(" "left=" indexmap "," "width=" seqterm "," "from=" integer
///               ["," "mirrored"] ")"
///   indexmap := signed term ("+"|"-" term)*   with term = [rational] ["n" ["^2"]]
///
/// Rationals are written a/b or plain integers; endpoints also accept "inf" /
/// "-inf" for rays.  Function names: affine, pow_abs, pow_ext, reciprocal,
/// sqrt_periodic, deriv, step_series, scale, sum, plus the short aliases
/// f1, f2, f3.  The printer (to_text) emits exactly this canonical form, and
/// parse(print(ast)) round-trips.

#include <string>

#include "funcspace/errors.hpp"
#include "funcspace/function_spec.hpp"
#include "funcspace/interval_family.hpp"

namespace funcspace {
inline namespace dsl {

/// Parses a function expression.  On failure the error message reads
/// "parse error at line L, column C: expected <set>, found <token>".
Result<FuncPtr> parse_function(const std::string& text);

/// Parses an interval-family literal such as
/// "{[-1,0) (0,1]}" or "{} ++ tail(left=2n, width=1/n^2, from=1)".
Result<IntervalFamily> parse_family(const std::string& text);

}  // namespace dsl
}  // namespace funcspace
