#include "funcspace/classifier.hpp"

#include <algorithm>
#include <utility>

namespace funcspace {
inline namespace classifier {

std::string to_string(SpaceId s) {
  switch (s) {
    case SpaceId::L1:
      return "L1";
    case SpaceId::Linf:
      return "Linf";
    case SpaceId::L1loc:
      return "L1loc";
    case SpaceId::L1H:
      return "L1H";
    case SpaceId::L1G:
      return "L1G";
    case SpaceId::ACloc:
      return "ACloc";
    case SpaceId::AC:
      return "AC";
  }
  return "?";
}

std::string to_string(Status s) {
  switch (s) {
    case Status::In:
      return "In";
    case Status::Out:
      return "Out";
    case Status::Unknown:
      return "Unknown";
  }
  return "?";
}

const Verdict& VennPlacement::at(SpaceId s) const {
  for (const Verdict& v : verdicts) {
    if (v.space == s) return v;
  }
  throw DomainError("VennPlacement: no verdict recorded for " + to_string(s));
}

namespace {

// ---------------------------------------------------------------------------
// Essential-sup analysis: a certified upper bound for |f|, a proof of
// unboundedness, or neither (sums of two unbounded parts may cancel).

struct SupUpper {
  std::optional<Rational> bound;
  bool unbounded = false;
  std::string why;
};

SupUpper sup_upper(const FunctionSpec& f) {
  return std::visit(
      [&](const auto& node) -> SupUpper {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Affine>) {
          if (node.a == 0) return {abs_of(node.b), false, "constant function"};
          return {std::nullopt, true, "affine with nonzero slope grows without bound on both rays"};
        } else if constexpr (std::is_same_v<T, PowerAbs>) {
          if (node.e > 0) return {std::nullopt, true, "|x|^e with e > 0 grows without bound"};
          if (node.e == 0) return {Rational(1), false, "unit absolute value away from 0"};
          return {std::nullopt, true, "|x|^e with e < 0 has a pole at 0"};
        } else if constexpr (std::is_same_v<T, Reciprocal>) {
          return {std::nullopt, true, "1/x has a pole at 0"};
        } else if constexpr (std::is_same_v<T, SqrtPeriodic>) {
          return {Rational(1), false, "the periodic square root has range [0, 1]"};
        } else if constexpr (std::is_same_v<T, SqrtPeriodicDeriv>) {
          return {std::nullopt, true, "1/(2 sqrt) blows up at every even integer"};
        } else if constexpr (std::is_same_v<T, StepSeries>) {
          if (node.coef.p < 0)
            return {std::nullopt, true, "the step heights grow without bound"};
          Enclosure first = abs_enclosure(node.coef.value_at(node.placement.from_index));
          return {first.hi, false, "step heights are nonincreasing; the first block is tallest"};
        } else if constexpr (std::is_same_v<T, Scale>) {
          SupUpper in = sup_upper(*node.inner);
          if (in.bound) in.bound = Rational(abs_of(node.r) * *in.bound);
          return in;
        } else {
          SupUpper l = sup_upper(*node.left);
          SupUpper r = sup_upper(*node.right);
          if (l.bound && r.bound)
            return {Rational(*l.bound + *r.bound), false, "sum of two bounded parts"};
          if (l.unbounded && r.bound)
            return {std::nullopt, true, l.why + " (the other summand is bounded)"};
          if (r.unbounded && l.bound)
            return {std::nullopt, true, r.why + " (the other summand is bounded)"};
          return {std::nullopt, false,
                  "sum of two unbounded parts: the supremum may or may not cancel"};
        }
      },
      f.node);
}

// ---------------------------------------------------------------------------
// Structural rule for "every superlevel set has infinite measure", the
// obstruction that keeps a function out of L1_H for all thresholds at once.

std::optional<std::string> always_infinite_note(const FunctionSpec& f) {
  return std::visit(
      [&](const auto& node) -> std::optional<std::string> {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Affine>) {
          if (node.a != 0)
            return "for every M the set {|f| >= M} contains two rays, so its measure is infinite";
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, PowerAbs>) {
          if (node.e > 0)
            return "for every M the set {|x|^e >= M} contains two rays, so its measure is infinite";
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, SqrtPeriodicDeriv>) {
          return "every threshold M leaves a window of width 1/(2 M^2) around each even integer, "
                 "so the superlevel measure is infinite for every M";
        } else if constexpr (std::is_same_v<T, StepSeries>) {
          if (node.coef.p < 0 && node.placement.width.p <= 1)
            return "the step heights grow without bound while the block widths sum divergently, "
                   "so every superlevel set has infinite measure";
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, Scale>) {
          return always_infinite_note(*node.inner);  // rescaling only shifts thresholds
        } else if constexpr (std::is_same_v<T, SumOf>) {
          auto l = always_infinite_note(*node.left);
          if (l && sup_upper(*node.right).bound)
            return *l + "; adding a bounded summand shifts thresholds without restoring finiteness";
          auto r = always_infinite_note(*node.right);
          if (r && sup_upper(*node.left).bound)
            return *r + "; adding a bounded summand shifts thresholds without restoring finiteness";
          return std::nullopt;
        } else {
          return std::nullopt;
        }
      },
      f.node);
}

// ---------------------------------------------------------------------------
// Superlevel sets per constructor.

/// Smallest n >= lo with n^k >= target (k >= 1).
unsigned long smallest_power_at_least(long long k, const Rational& target, unsigned long lo) {
  unsigned long hi = std::max<unsigned long>(lo, 1);
  while (pow_int(Rational(hi), k) < target) hi = hi * 2 + 1;
  unsigned long lo2 = lo;
  while (lo2 < hi) {
    unsigned long mid = lo2 + (hi - lo2) / 2;
    if (pow_int(Rational(mid), k) >= target)
      hi = mid;
    else
      lo2 = mid + 1;
  }
  return lo2;
}

long long integer_exponent(const Rational& p) {
  // Factories guarantee integer exponents for step-series coefficients.
  return num(p).convert_to<long long>();
}

Result<IntervalFamily> step_superlevel(const StepSeries& s, const Rational& M) {
  const Rational height_c = abs_of(s.coef.c);
  const long long p = integer_exponent(s.coef.p);
  const unsigned long from = s.placement.from_index;
  if (p == 0) {
    if (height_c >= M) return Result<IntervalFamily>::ok(IntervalFamily::with_tail({}, s.placement));
    return Result<IntervalFamily>::ok(IntervalFamily::empty());
  }
  if (p < 0) {
    // Heights |c| n^|p| grow: the superlevel is the whole tail from the
    // first index where the height clears M.
    unsigned long n0 = smallest_power_at_least(-p, Rational(M / height_c), from);
    TailDescriptor t = s.placement;
    t.from_index = n0;
    return Result<IntervalFamily>::ok(IntervalFamily::with_tail({}, t));
  }
  // Heights decay: finitely many blocks clear M, namely n^p <= |c|/M.
  const Rational cap = Rational(height_c / M);
  if (pow_int(Rational(from), p) > cap) return Result<IntervalFamily>::ok(IntervalFamily::empty());
  unsigned long past = from;  // first index whose height drops below M
  while (pow_int(Rational(past), p) <= cap) {
    ++past;
    if (past - from > 200000)
      return Result<IntervalFamily>::fail(
          "superlevel head would materialize more than 200000 blocks");
  }
  std::vector<Interval> head;
  for (unsigned long n = from; n < past; ++n) {
    head.push_back(s.placement.interval_at(n));
    if (s.placement.mirrored) head.push_back(s.placement.mirrored_interval_at(n));
  }
  return Result<IntervalFamily>::ok(IntervalFamily::of(std::move(head)));
}

}  // namespace

Result<IntervalFamily> superlevel(const FunctionSpec& f, const Rational& M) {
  if (M <= 0) throw DomainError("superlevel threshold must be positive");
  using R = Result<IntervalFamily>;
  return std::visit(
      [&](const auto& node) -> R {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Affine>) {
          if (node.a == 0) {
            return R::ok(abs_of(node.b) >= M ? IntervalFamily::full_line()
                                             : IntervalFamily::empty());
          }
          Rational r1((M - node.b) / node.a);
          Rational r2((-M - node.b) / node.a);
          IntervalFamily fam;
          fam.set_neg_ray({std::min(r1, r2), true});
          fam.set_pos_ray({std::max(r1, r2), true});
          return R::ok(fam);
        } else if constexpr (std::is_same_v<T, PowerAbs>) {
          if (node.e == 0) {
            return R::ok(M <= 1 ? IntervalFamily::full_line() : IntervalFamily::empty());
          }
          Enclosure t = pow_enclosure(M, Rational(1 / node.e));
          if (node.e > 0) {
            // {|x| >= M^(1/e)}: two rays, endpoint rounded outward.
            IntervalFamily fam;
            fam.set_neg_ray({Rational(-t.lo), true});
            fam.set_pos_ray({t.lo, true});
            return R::ok(fam);
          }
          // {0 < |x| <= M^(1/e)}: a punctured symmetric window.
          Rational s = t.hi;
          return R::ok(IntervalFamily::of({Interval{Rational(-s), Rational(0), true, false},
                                           Interval{Rational(0), s, false, true}}));
        } else if constexpr (std::is_same_v<T, Reciprocal>) {
          Rational s(1 / M);
          return R::ok(IntervalFamily::of({Interval{Rational(-s), Rational(0), true, false},
                                           Interval{Rational(0), s, false, true}}));
        } else if constexpr (std::is_same_v<T, SqrtPeriodic>) {
          if (M >= 1) return R::ok(IntervalFamily::empty());  // M = 1: only the odd integers
          // sqrt(|x - 2m|) >= M on [2m + M^2, 2m + 2 - M^2] between poles.
          Rational q(M * M);
          TailDescriptor t{1, IndexMap{Rational(0), Rational(2), Rational(q - 2)},
                           SeqTerm{Rational(2 - 2 * q), Rational(0)}, true};
          return R::ok(IntervalFamily::with_tail({}, t));
        } else if constexpr (std::is_same_v<T, SqrtPeriodicDeriv>) {
          // 1/(2 sqrt t) >= M on t <= 1/(4 M^2): a window at every even integer.
          Rational q(Rational(1) / (4 * M * M));
          if (q >= 1) return R::ok(IntervalFamily::full_line());
          TailDescriptor t{1, IndexMap{Rational(0), Rational(2), Rational(-q)},
                           SeqTerm{Rational(2 * q), Rational(0)}, true};
          return R::ok(IntervalFamily::with_tail({Interval{Rational(-q), q, true, true}}, t));
        } else if constexpr (std::is_same_v<T, StepSeries>) {
          return step_superlevel(node, M);
        } else if constexpr (std::is_same_v<T, Scale>) {
          return superlevel(*node.inner, Rational(M / abs_of(node.r)));
        } else {
          return R::fail(
              "superlevel of a sum is not representable in the interval-family catalog; "
              "membership uses a bounded-part sandwich instead");
        }
      },
      f.node);
}

namespace {

/// Outer envelope of {|f| >= M}: equals superlevel() except for sums, where
/// a bounded summand B yields the superset {|other| >= M - B}. Soundness
/// only needs the superset direction: finite outer measure bounds the true
/// measure, and a finite outer integral bounds the true one.
Result<IntervalFamily> superlevel_outer(const FunctionSpec& f, const Rational& M) {
  if (const auto* sum = std::get_if<SumOf>(&f.node)) {
    SupUpper ls = sup_upper(*sum->left);
    SupUpper rs = sup_upper(*sum->right);
    if (ls.bound && rs.bound) {
      if (Rational(*ls.bound + *rs.bound) < M) return Result<IntervalFamily>::ok(IntervalFamily::empty());
      return Result<IntervalFamily>::ok(IntervalFamily::full_line());
    }
    if (ls.bound) {
      if (M > *ls.bound) return superlevel_outer(*sum->right, Rational(M - *ls.bound));
      return Result<IntervalFamily>::ok(IntervalFamily::full_line());
    }
    if (rs.bound) {
      if (M > *rs.bound) return superlevel_outer(*sum->left, Rational(M - *rs.bound));
      return Result<IntervalFamily>::ok(IntervalFamily::full_line());
    }
    return Result<IntervalFamily>::fail(
        "superlevel of a sum of two unbounded parts is not representable");
  }
  if (const auto* sc = std::get_if<Scale>(&f.node))
    return superlevel_outer(*sc->inner, Rational(M / abs_of(sc->r)));
  return superlevel(f, M);
}

// ---------------------------------------------------------------------------
// Per-space memberships.

Verdict membership_l1h(const FunctionSpec& f, const Options& opts) {
  Verdict v{SpaceId::L1H};
  if (auto note = always_infinite_note(f)) {
    v.status = Status::Out;
    v.certificate = AttributeCert{*note};
    return v;
  }
  Rational M(1);
  for (unsigned k = 0; k <= opts.kmax; ++k, M = Rational(2 * M)) {
    auto sl = superlevel_outer(f, M);
    if (!sl) {
      v.status = Status::Unknown;
      v.reason = sl.error();
      return v;
    }
    ExtendedValue m = measure(*sl);
    if (m.is_finite()) {
      v.status = Status::In;
      v.certificate = ThresholdCert{M, *sl, m,
                                    ExtendedValue::unknown("integral not evaluated for L1_H")};
      return v;
    }
  }
  v.status = Status::Unknown;
  v.reason = "doubling search exhausted: no threshold M = 2^k (k <= " +
             std::to_string(opts.kmax) + ") gave a finite superlevel measure";
  return v;
}

Verdict membership_l1g(const FunctionSpec& f, const Options& opts) {
  Verdict v{SpaceId::L1G};
  Verdict h = membership_l1h(f, opts);
  if (h.status == Status::Out) {
    v.status = Status::Out;
    v.certificate = ImplicationCert{
        SpaceId::L1H, "outside L1_H, and L1_G is contained in L1_H, so outside L1_G"};
    return v;
  }
  if (h.status == Status::Unknown) {
    v.status = Status::Unknown;
    v.reason = "L1_H membership unresolved first: " + h.reason;
    return v;
  }
  Rational M(1);
  for (unsigned k = 0; k <= opts.kmax; ++k, M = Rational(2 * M)) {
    auto sl = superlevel_outer(f, M);
    if (!sl) {
      v.status = Status::Unknown;
      v.reason = sl.error();
      return v;
    }
    ExtendedValue m = measure(*sl);
    if (!m.is_finite()) continue;  // below the L1_H witness threshold
    IntegralResult ir = integral_abs_over(f, *sl, opts.depth, opts.refine);
    if (ir.value.is_finite()) {
      v.status = Status::In;
      v.certificate = ThresholdCert{M, *sl, m, ir.value};
      return v;
    }
    if (ir.value.is_infinite()) {
      // A finite-measure family with a divergent integral refutes
      // integrability over finite-measure sets outright.
      v.status = Status::Out;
      v.certificate = DivergentFamilyCert{*sl, ir.ledger, ir.value.certificate()};
      return v;
    }
  }
  v.status = Status::Unknown;
  v.reason = "no threshold yielded a decidable integral over the superlevel set";
  return v;
}

Verdict membership_l1(const FunctionSpec& f, const Options& opts) {
  Verdict v{SpaceId::L1};
  IntegralResult ir = integral_abs_over(f, IntervalFamily::full_line(), opts.depth, opts.refine);
  if (ir.value.is_finite()) {
    v.status = Status::In;
    v.certificate = BoundCert{"integral of |f| over the whole line", ir.value.enclosure()};
  } else if (ir.value.is_infinite()) {
    v.status = Status::Out;
    v.certificate = DivergentFamilyCert{IntervalFamily::full_line(), ir.ledger,
                                        ir.value.certificate()};
  } else {
    v.status = Status::Unknown;
    v.reason = ir.value.reason();
  }
  return v;
}

Verdict membership_linf(const FunctionSpec& f) {
  Verdict v{SpaceId::Linf};
  SupUpper s = sup_upper(f);
  if (s.bound) {
    v.status = Status::In;
    v.certificate = BoundCert{"upper bound for the essential sup of |f| (" + s.why + ")",
                              Enclosure::point(*s.bound)};
  } else if (s.unbounded) {
    v.status = Status::Out;
    v.certificate = AttributeCert{s.why};
  } else {
    v.status = Status::Unknown;
    v.reason = s.why;
  }
  return v;
}

Verdict membership_l1loc(const FunctionSpec& f, const Options& opts) {
  Verdict v{SpaceId::L1loc};
  // Every catalog constructor is integrable on compacts except through a
  // pole at 0 (reciprocal, |x|^e with e <= -1), so one window decides.
  Interval window{Rational(-1), Rational(1), true, true};
  ExtendedValue ev = integral_abs_on_interval(f, window, opts.refine);
  if (ev.is_finite()) {
    v.status = Status::In;
    v.certificate = BoundCert{
        "integral of |f| over [-1, 1]; away from 0 every catalog constructor is "
        "bounded on compacts or has an integrable singularity",
        ev.enclosure()};
  } else if (ev.is_infinite()) {
    v.status = Status::Out;
    v.certificate = DivergentFamilyCert{
        IntervalFamily::of({Interval{Rational(-1), Rational(1), true, false}}), {},
        ev.certificate()};
  } else {
    v.status = Status::Unknown;
    v.reason = ev.reason();
  }
  return v;
}

Verdict membership_acloc(const FunctionSpec& f) {
  Verdict v{SpaceId::ACloc};
  CatalogAttributes attrs = attributes(f);
  std::string why = attrs.ac_loc_why.empty()
                        ? std::string("recorded per-constructor absolute-continuity attribute")
                        : attrs.ac_loc_why;
  v.status = attrs.ac_loc ? Status::In : Status::Out;
  v.certificate = AttributeCert{why};
  return v;
}

}  // namespace

Verdict ac_via_theorem1(const FunctionSpec& f, const Options& opts) {
  Verdict v{SpaceId::AC};
  auto d = derivative(f);
  if (!d) {
    v.status = Status::Unknown;
    v.reason = "no almost-everywhere derivative in the catalog: " + d.error();
    return v;
  }
  CatalogAttributes attrs = attributes(f);
  if (!attrs.ac_loc) {
    v.status = Status::Out;
    v.reason = "not locally absolutely continuous (" + attrs.ac_loc_why +
               "), and AC implies AC_loc";
    v.certificate = ImplicationCert{SpaceId::ACloc, v.reason};
    return v;
  }
  Verdict g = membership(**d, SpaceId::L1G, opts);
  if (g.status == Status::In) {
    v.status = Status::In;
    v.reason = "f is AC_loc and f' lies in L1_G; the equivalence upgrades this to AC "
               "on the whole line";
    v.certificate = ImplicationCert{SpaceId::L1G, v.reason};
  } else if (g.status == Status::Out) {
    std::string why = "f' lies outside L1_G";
    if (g.certificate && std::holds_alternative<ImplicationCert>(*g.certificate))
      why = "f' lies outside L1_H, hence outside L1_G";
    v.status = Status::Out;
    v.reason = why + "; by the equivalence f is not AC";
    v.certificate = ImplicationCert{SpaceId::L1G, v.reason};
  } else {
    v.status = Status::Unknown;
    v.reason = "membership of f' in L1_G unresolved: " + g.reason;
  }
  return v;
}

Verdict membership(const FunctionSpec& f, SpaceId space, const Options& opts) {
  switch (space) {
    case SpaceId::L1:
      return membership_l1(f, opts);
    case SpaceId::Linf:
      return membership_linf(f);
    case SpaceId::L1loc:
      return membership_l1loc(f, opts);
    case SpaceId::L1H:
      return membership_l1h(f, opts);
    case SpaceId::L1G:
      return membership_l1g(f, opts);
    case SpaceId::ACloc:
      return membership_acloc(f);
    case SpaceId::AC:
      return ac_via_theorem1(f, opts);
  }
  throw DomainError("membership: unhandled space");
}

Result<VariationBound> l1g_bound_via_variation(const FunctionSpec& f, const IntervalFamily& fam,
                                               const Rational& delta, const Options& opts) {
  using R = Result<VariationBound>;
  (void)opts;
  if (delta <= 0) return R::fail("delta must be positive");
  if (!fam.is_finite_union())
    return R::fail("the constructive variation bound requires a finite interval union");
  ExtendedValue m = measure(fam);
  if (!m.is_finite()) return R::fail("the family must have finite measure");
  const Rational total_len = m.enclosure().hi;  // exact for finite unions

  VariationBound out;
  out.small_measure_case = total_len < delta;
  if (out.small_measure_case) {
    // Case 1: the family's total length already sits below delta, so one
    // application of the epsilon = 1 modulus bounds the whole integral.
    out.n0 = 0;
    out.bound = Rational(1);
  } else {
    out.n0 = floor_of(Rational(total_len / (delta / 2)));
    out.bound = Rational(Rational(out.n0) + 1);
  }

  IntervalFamily pieces = chop(fam, delta);
  Enclosure total = Enclosure::point(Rational(0));
  for (const Interval& piece : pieces.head()) {
    ExtendedValue pv = total_variation(f, piece.left, piece.right);
    if (pv.is_infinite())
      return R::fail("modulus-violation: a piece of length at most delta has infinite variation");
    if (pv.is_unknown())
      return R::fail("piece variation could not be certified: " + pv.reason());
    Enclosure e = pv.enclosure();
    if (e.lo > 1)
      return R::fail(
          "modulus-violation: a piece of length at most delta has variation above 1, so delta "
          "is not an epsilon = 1 modulus for f");
    if (e.hi > 1)
      return R::fail("piece variation enclosure straddles 1; cannot certify the modulus");
    total = total + e;
  }
  out.pieces = pieces.head().size();
  out.total_variation = total;
  if (total.lo > out.bound)
    return R::fail("modulus-violation: the summed variation exceeds the n0 + 1 bound");
  if (total.hi > out.bound)
    return R::fail("total variation enclosure straddles the n0 + 1 bound; cannot certify");
  return R::ok(out);
}

VennPlacement classify(const FunctionSpec& f, const Options& opts) {
  VennPlacement p;
  for (SpaceId s : {SpaceId::L1, SpaceId::Linf, SpaceId::L1loc, SpaceId::L1H, SpaceId::L1G,
                    SpaceId::ACloc, SpaceId::AC}) {
    p.verdicts.push_back(membership(f, s, opts));
  }
  auto check = [&](SpaceId small, SpaceId big, const char* law) {
    if (p.status_of(small) == Status::In && p.status_of(big) == Status::Out)
      throw LatticeViolation(std::string("lattice violation (") + law + ") for " + to_text(f));
  };
  check(SpaceId::L1, SpaceId::L1G, "L1 inside L1_G");
  check(SpaceId::Linf, SpaceId::L1G, "Linf inside L1_G");
  check(SpaceId::L1G, SpaceId::L1H, "L1_G inside L1_H");
  check(SpaceId::L1, SpaceId::L1loc, "L1 inside L1_loc");
  check(SpaceId::AC, SpaceId::ACloc, "AC inside AC_loc");
  return p;
}

}  // namespace classifier
}  // namespace funcspace
