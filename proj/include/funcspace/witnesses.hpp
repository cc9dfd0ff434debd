#pragma once

#include <utility>
#include <vector>

#include "funcspace/classifier.hpp"

namespace funcspace {
inline namespace witnesses {

/// Witness that the periodic square root is not absolutely continuous:
/// k interval pairs (x_i, y_i) = (2i, 2i + delta/i^2) whose total length
/// stays below 2*delta while the variation sum sqrt(delta)*H_k clears
/// epsilon_claim. Growing k drives the variation up at fixed length budget.
struct ACFailureWitness {
  Rational delta;
  std::vector<std::pair<Rational, Rational>> pairs;
  Enclosure length_sum;     // exact: delta * sum of 1/i^2
  Enclosure variation_sum;  // encloses sqrt(delta) * H_k
  Rational epsilon_claim;   // certified: variation_sum.lo
};

/// Requires 0 < delta < 1/2 and k >= 1.
ACFailureWitness ac_failure_intervals(const Rational& delta, unsigned long k);

/// The set A = union of [2n, 2n + 1/n^2): finite measure, yet the a.e.
/// derivative of the periodic square root has divergent integral over it.
struct SetACertificate {
  IntervalFamily family;
  ExtendedValue set_measure = ExtendedValue::unknown("not computed");  // finite; encloses pi^2/6
  IntegralResult derivative_integral;  // proven infinite; harmonic ledger
  std::string conclusion;
};

SetACertificate application_set_A(unsigned long depth = 100);

/// Disjoint families A_1..A_N with mu(A_n) <= r_n = 1/n^2 while the
/// integral of |f'| over each A_n stays above epsilon: the measure budget
/// shrinks but the variation does not, certifying that f' integrates
/// divergently over a finite-measure union.
struct AdversaryLedger {
  FuncPtr f;  // generator carrier (periodic square root)
  Rational epsilon;
  Rational delta;  // per-interval depth parameter, fixed so sqrt(delta) is exact
  SeqTerm budget;  // r_n = 1/n^2
  std::vector<Rational> cutoffs;  // L_n = sup of A_1..A_n
  std::vector<IntervalFamily> families;
  std::vector<unsigned long> start_index;  // first harmonic index of each run
  std::vector<unsigned long> count;        // run length k_n
  /// Certified exact value of the integral of |f'| over A_n.
  std::vector<Rational> per_family_lower_bounds;
  /// The weaker epsilon*(1 - 1/n^2) shape the general argument yields.
  std::vector<Rational> proof_shape_bounds;
  std::vector<Rational> m_values;  // min(delta, r_n)
  Enclosure union_measure;         // exact sum of all family measures
  DivergenceCertificate union_divergence;
};

/// Fails budget-infeasible when the generator cannot reach epsilon within
/// the measure budgets (bounded-variation generators, or epsilon so large
/// the interval count would exceed the construction cap).
Result<AdversaryLedger> theorem1_adversary(const FuncPtr& f, unsigned long N,
                                           const Rational& epsilon);

/// Disjoint pieces G_n inside the superlevel sets {|f| >= n}, each of
/// measure between 1/n^2 and 2/n^2, so the integral of |f| over G_n is at
/// least n * mu(G_n) >= 1/n and the partial sums grow like harmonic numbers.
/// Applies exactly to functions outside L1_H (every superlevel infinite).
struct Theorem2Ledger {
  FuncPtr f;
  std::vector<IntervalFamily> superlevels;  // S_n = {|f| >= n}
  /// Window indices a_n (strictly increasing) with G_n inside
  /// [-a_n/(2 n^2), a_n/(2 n^2)], back-solved from the chosen pieces.
  std::vector<BigInt> window_indices;
  std::vector<IntervalFamily> pieces;  // G_n
  std::vector<Enclosure> measures;
  std::vector<Rational> integral_lower_bounds;  // n * mu(G_n)
};

Result<Theorem2Ledger> theorem2_construction(const FuncPtr& f, unsigned long N,
                                             const classifier::Options& opts = {});

/// Outcome of an independent re-check: every stated measure, containment,
/// and integral bound recomputed from scratch.
struct VerificationReport {
  std::size_t checks = 0;
  std::string summary;
};

Result<VerificationReport> verify_witness(const ACFailureWitness& w);
Result<VerificationReport> verify_ledger(const AdversaryLedger& led);
Result<VerificationReport> verify_ledger(const Theorem2Ledger& led,
                                         const classifier::Options& opts = {});

}  // namespace witnesses
}  // namespace funcspace
