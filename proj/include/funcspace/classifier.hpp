#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "funcspace/integration.hpp"
#include "funcspace/variation.hpp"

namespace funcspace {
inline namespace classifier {

/// The five function spaces plus the two absolute-continuity classes.
enum class SpaceId { L1, Linf, L1loc, L1H, L1G, ACloc, AC };

enum class Status { In, Out, Unknown };

std::string to_string(SpaceId s);
std::string to_string(Status s);

/// A named certified quantity (an integral or a sup bound).
struct BoundCert {
  std::string quantity;
  Enclosure value;
};

/// Witness threshold M with its superlevel set {x : |f(x)| >= M}, the
/// set's measure, and the integral of |f| over it. The memberships that
/// quantify over finite-measure sets reduce to this split at level M.
struct ThresholdCert {
  Rational threshold;
  IntervalFamily superlevel_set;
  ExtendedValue measure;
  ExtendedValue tail_integral;
};

/// A finite-measure family over which the integral of |f| provably
/// diverges; the finite measure is what makes it a counterexample.
struct DivergentFamilyCert {
  IntervalFamily family;
  std::vector<std::pair<unsigned long, Rational>> ledger;
  DivergenceCertificate divergence;
};

/// A per-constructor structural fact with its recorded justification.
struct AttributeCert {
  std::string justification;
};

/// Membership forced by an inclusion between spaces.
struct ImplicationCert {
  SpaceId from;
  std::string direction;
};

using Certificate =
    std::variant<BoundCert, ThresholdCert, DivergentFamilyCert, AttributeCert, ImplicationCert>;

/// In/Out verdicts always carry a certificate; Unknown carries a reason.
struct Verdict {
  SpaceId space;
  Status status = Status::Unknown;
  std::optional<Certificate> certificate;
  std::string reason;
};

/// One verdict per space; consistent with the inclusion lattice.
struct VennPlacement {
  std::vector<Verdict> verdicts;

  const Verdict& at(SpaceId s) const;
  Status status_of(SpaceId s) const { return at(s).status; }
};

struct Options {
  /// Tail materialization depth for family integrals.
  unsigned long depth = 100;
  /// Doubling-search cap: thresholds M = 2^k for k = 0..kmax.
  unsigned kmax = 64;
  RefineOpts refine{};
};

/// The set {x : |f(x)| >= M} as an interval family, computed per
/// constructor and exact wherever the threshold crossing is rational
/// (otherwise an outer rounding, still a superset up to a null set).
/// Fails for sums, whose superlevel sets leave the family catalog.
Result<IntervalFamily> superlevel(const FunctionSpec& f, const Rational& M);
inline Result<IntervalFamily> superlevel(const FuncPtr& f, const Rational& M) {
  return superlevel(*f, M);
}

Verdict membership(const FunctionSpec& f, SpaceId space, const Options& opts = {});
inline Verdict membership(const FuncPtr& f, SpaceId space, const Options& opts = {}) {
  return membership(*f, space, opts);
}

/// Full-line absolute continuity, decided by the equivalence
/// AC = AC_loc together with f' in L1_G.
Verdict ac_via_theorem1(const FunctionSpec& f, const Options& opts = {});
inline Verdict ac_via_theorem1(const FuncPtr& f, const Options& opts = {}) {
  return ac_via_theorem1(*f, opts);
}

/// Output of l1g_bound_via_variation: the integral of |f'| over the family
/// is at most `bound` = n0 + 1 with n0 = floor(measure / (delta/2)), and the
/// bound was verified constructively by chopping the family into pieces of
/// length at most delta and certifying each piece's variation <= 1.
struct VariationBound {
  BigInt n0;
  Rational bound;
  /// True when the whole family already has measure < delta.
  bool small_measure_case = false;
  std::size_t pieces = 0;
  Enclosure total_variation;
};

/// delta must be an (epsilon = 1) absolute-continuity modulus for f; a
/// chopped piece with certified variation above 1 fails as modulus-violation.
Result<VariationBound> l1g_bound_via_variation(const FunctionSpec& f, const IntervalFamily& fam,
                                               const Rational& delta, const Options& opts = {});
inline Result<VariationBound> l1g_bound_via_variation(const FuncPtr& f, const IntervalFamily& fam,
                                                      const Rational& delta,
                                                      const Options& opts = {}) {
  return l1g_bound_via_variation(*f, fam, delta, opts);
}

/// Runs membership for every space and asserts the inclusion lattice
/// (throws LatticeViolation on an inconsistent In/Out pair).
VennPlacement classify(const FunctionSpec& f, const Options& opts = {});
inline VennPlacement classify(const FuncPtr& f, const Options& opts = {}) {
  return classify(*f, opts);
}

}  // namespace classifier
}  // namespace funcspace
