#pragma once

/// Deterministic JSON reports and CSV plot tables.  All rational quantities
/// serialize as exact "a/b" strings; identical inputs produce byte-identical
/// output (nlohmann::ordered_json keeps insertion order).

#include <string>

#include "json.hpp"

#include "funcspace/classifier.hpp"
#include "funcspace/witnesses.hpp"

namespace funcspace {
inline namespace dsl {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "funcspace";
inline constexpr const char* kToolVersion = "1.0.0";

Json json_of(const Enclosure& e);
Json json_of(const ExtendedValue& v);
Json json_of(const DivergenceCertificate& c);
Json json_of(const classifier::Certificate& c);
Json json_of(const Verdict& v);
Json json_of(const VennPlacement& p);
Json json_of(const ACFailureWitness& w);
Json json_of(const SetACertificate& c);
Json json_of(const AdversaryLedger& led);
Json json_of(const Theorem2Ledger& led);
Json json_of(const VerificationReport& rep);

/// One-line summary such as "In: L1loc, ACloc, AC | Out: L1, Linf, L1H, L1G".
std::string placement_line(const VennPlacement& p);

/// Full classification report: tool banner, parameters, verdicts, placement.
Json classify_report(const FuncPtr& f, const classifier::Options& opts = {});

/// CSV sample table: header "series,x,y"; rows "f,<x>,<midpoint>" at uniform
/// rational steps (undefined points skipped); mark intervals appear as a
/// second band of rows "mark,<endpoint>,0".  Fails on lo >= hi or samples < 2.
Result<std::string> plot_csv(const FuncPtr& f, const Rational& lo, const Rational& hi,
                             unsigned long samples,
                             const IntervalFamily* marks = nullptr);

}  // namespace dsl
}  // namespace funcspace
