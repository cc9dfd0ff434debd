#include "funcspace/witnesses.hpp"

#include <algorithm>
#include <utility>

namespace funcspace {
inline namespace witnesses {

namespace {

Rational inv_square(unsigned long n) { return Rational(BigInt(1), BigInt(n) * n); }

/// All bounded components of a finite-union family, sorted by left endpoint.
std::vector<Interval> sorted_components(const std::vector<IntervalFamily>& fams) {
  std::vector<Interval> all;
  for (const IntervalFamily& f : fams)
    for (const Interval& iv : f.head()) all.push_back(iv);
  std::sort(all.begin(), all.end(),
            [](const Interval& a, const Interval& b) { return a.left < b.left; });
  return all;
}

Rational sup_abs(const IntervalFamily& fam) {
  Rational s(0);
  for (const Interval& iv : fam.head()) {
    s = std::max(s, abs_of(iv.left));
    s = std::max(s, abs_of(iv.right));
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// AC-failure interval pairs

ACFailureWitness ac_failure_intervals(const Rational& delta, unsigned long k) {
  if (!(delta > 0) || !(delta < Rational(1, 2)))
    throw DomainError("ac_failure_intervals: delta must lie in (0, 1/2)");
  if (k == 0) throw DomainError("ac_failure_intervals: k must be at least 1");

  ACFailureWitness w;
  w.delta = delta;
  Rational length(0);
  Rational harmonic(0);
  for (unsigned long i = 1; i <= k; ++i) {
    Rational x(2 * BigInt(i));
    Rational gap(delta * inv_square(i));
    w.pairs.emplace_back(x, Rational(x + gap));
    length += gap;
    harmonic += Rational(BigInt(1), BigInt(i));
  }
  w.length_sum = Enclosure::point(length);
  w.variation_sum = scale(harmonic, sqrt_enclosure(delta));
  w.epsilon_claim = w.variation_sum.lo;
  if (!(w.length_sum.hi < Rational(2 * delta)))
    throw LatticeViolation("ac_failure_intervals: length bound failed (unreachable)");
  return w;
}

Result<VerificationReport> verify_witness(const ACFailureWitness& w) {
  using R = Result<VerificationReport>;
  VerificationReport rep;
  FuncPtr f = make_sqrt_periodic();
  Rational length(0);
  Rational harmonic(0);
  Rational prev_right(-1);
  for (unsigned long i = 1; i <= w.pairs.size(); ++i) {
    const auto& [x, y] = w.pairs[i - 1];
    if (x != Rational(2 * BigInt(i))) return R::fail("pair left endpoint is not 2i");
    if (Rational(y - x) != Rational(w.delta * inv_square(i)))
      return R::fail("pair gap is not delta/i^2");
    if (!(x > prev_right)) return R::fail("pairs are not disjoint");
    prev_right = y;
    length += Rational(y - x);
    harmonic += Rational(BigInt(1), BigInt(i));
    // The function vanishes at x and rises to sqrt(delta)/i at y.
    auto fx = evaluate(f, x);
    auto fy = evaluate(f, y);
    if (!fx || !fy) return R::fail("witness endpoint not evaluable");
    if (!(fx->lo == 0 && fx->hi == 0)) return R::fail("f does not vanish at the pair start");
    Enclosure step = sqrt_enclosure(Rational(w.delta * inv_square(i)));
    if (!fy->intersects(step)) return R::fail("variation step mismatch at index " +
                                              std::to_string(i));
    rep.checks += 4;
  }
  if (w.length_sum.lo != length || w.length_sum.hi != length)
    return R::fail("length_sum does not equal the exact pair-length total");
  if (!(length < Rational(2 * w.delta))) return R::fail("length_sum fails the 2*delta bound");
  Enclosure variation = scale(harmonic, sqrt_enclosure(w.delta));
  if (!variation.intersects(w.variation_sum))
    return R::fail("variation_sum disagrees with the recomputed value");
  if (!(w.epsilon_claim <= w.variation_sum.lo))
    return R::fail("epsilon_claim exceeds the certified variation lower bound");
  rep.checks += 4;
  rep.summary = "recomputed " + std::to_string(w.pairs.size()) +
                " pairs: lengths, disjointness, and variation steps all confirmed";
  return R::ok(rep);
}

// ---------------------------------------------------------------------------
// The finite-measure set with divergent derivative integral

SetACertificate application_set_A(unsigned long depth) {
  SetACertificate out;
  out.family = IntervalFamily::with_tail(
      {}, TailDescriptor{1, IndexMap{Rational(0), Rational(2), Rational(0)},
                         SeqTerm{Rational(1), Rational(2)}, false});
  out.set_measure = measure(out.family);
  out.derivative_integral =
      integral_abs_over(*make_sqrt_periodic_deriv(), out.family, depth);
  out.conclusion =
      "A has finite measure while the integral of |f'| over A diverges like the harmonic "
      "series, so f' lies outside L1_G and the periodic square root is not absolutely "
      "continuous on the line";
  return out;
}

// ---------------------------------------------------------------------------
// Adversarial families: shrinking measure budgets, non-shrinking variation

namespace {

/// Hard cap on intervals per family; beyond it the exact harmonic
/// bookkeeping (and the construction itself) stops being practical.
constexpr unsigned long kFamilyCap = 20000;

}  // namespace

Result<AdversaryLedger> theorem1_adversary(const FuncPtr& f, unsigned long N,
                                           const Rational& epsilon) {
  using R = Result<AdversaryLedger>;
  if (!f) throw DomainError("theorem1_adversary: null function");
  if (N == 0) throw DomainError("theorem1_adversary: N must be at least 1");
  if (!(epsilon > 0)) throw DomainError("theorem1_adversary: epsilon must be positive");

  if (!std::holds_alternative<SqrtPeriodic>(f->node)) {
    if (const auto* aff = std::get_if<Affine>(&f->node)) {
      if (aff->a == 0)
        return R::fail(
            "budget-infeasible: the generator has total variation 0, which can never reach a "
            "positive epsilon");
      return R::fail(
          "budget-infeasible: an affine generator concentrates no variation, so integrals "
          "over sets of measure r_n shrink with r_n and cannot stay above epsilon");
    }
    return R::fail("no AC-failure witness generator for " + to_text(f));
  }

  AdversaryLedger led;
  led.f = f;
  led.epsilon = epsilon;
  led.delta = Rational(1, 4);  // sqrt(delta) = 1/2 exactly
  led.budget = SeqTerm{Rational(1), Rational(2)};

  const Rational sqrt_delta(1, 2);
  const Rational harmonic_target(2 * epsilon);  // sum of 1/i must reach epsilon/sqrt(delta)
  Rational total_measure(0);
  Rational cutoff(0);

  for (unsigned long n = 1; n <= N; ++n) {
    const Rational r_n = inv_square(n);
    // Start the harmonic run at s with (1/4) * sum_{i>=s} 1/i^2 <= 1/(4(s-1)) <= r_n,
    // so the measure budget holds no matter how long the run gets.
    BigInt s_big = ceil_of(Rational(BigInt(n) * n, 4)) + 1;
    const unsigned long s = s_big.convert_to<unsigned long>();

    Rational harmonic(0);
    Rational lengths(0);
    unsigned long k = 0;
    while (harmonic < harmonic_target) {
      const unsigned long i = s + k;
      harmonic += Rational(BigInt(1), BigInt(i));
      lengths += inv_square(i);
      ++k;
      if (k > kFamilyCap)
        return R::fail("budget-infeasible: family " + std::to_string(n) + " would need more than " +
                       std::to_string(kFamilyCap) +
                       " intervals to reach epsilon; epsilon is too large for this budget");
    }

    const Rational family_measure(led.delta * lengths);
    if (!(family_measure <= r_n))
      throw LatticeViolation("theorem1_adversary: measure budget violated (unreachable)");

    // Place the run at consecutive even integers strictly beyond the cutoff.
    BigInt base_half = floor_of(Rational(cutoff / 2)) + 1;
    const Rational base(2 * base_half);
    std::vector<Interval> head;
    head.reserve(k);
    for (unsigned long j = 0; j < k; ++j) {
      const unsigned long i = s + j;
      Rational left(base + 2 * BigInt(j));
      Rational width(led.delta * inv_square(i));
      head.push_back(Interval{left, Rational(left + width), true, true});
    }
    IntervalFamily fam = IntervalFamily::of(std::move(head));

    const Rational bound(sqrt_delta * harmonic);  // exact integral of |f'| over the family
    cutoff = fam.head().back().right;
    total_measure += family_measure;

    led.cutoffs.push_back(cutoff);
    led.families.push_back(std::move(fam));
    led.start_index.push_back(s);
    led.count.push_back(k);
    led.per_family_lower_bounds.push_back(bound);
    led.proof_shape_bounds.push_back(Rational(epsilon * Rational(1 - inv_square(n))));
    led.m_values.push_back(std::min(led.delta, r_n));
  }

  led.union_measure = Enclosure::point(total_measure);

  std::vector<std::pair<unsigned long, Rational>> entries;
  for (unsigned long n = 1; n <= N; ++n)
    entries.emplace_back(n, led.per_family_lower_bounds[n - 1]);
  auto fitted = divergence_by_comparison(entries);
  if (auto* cert = std::get_if<DivergenceCertificate>(&fitted)) {
    cert->note = "per-family integral lower bounds stay above epsilon while the measure "
                 "budgets 1/n^2 sum finitely; " +
                 cert->note;
    led.union_divergence = *cert;
  } else {
    throw LatticeViolation("theorem1_adversary: constant bounds rejected by the comparison "
                           "fit (unreachable)");
  }
  return R::ok(led);
}

Result<VerificationReport> verify_ledger(const AdversaryLedger& led) {
  using R = Result<VerificationReport>;
  VerificationReport rep;
  const unsigned long N = led.families.size();
  if (N == 0) return R::fail("empty ledger");
  if (led.cutoffs.size() != N || led.per_family_lower_bounds.size() != N ||
      led.proof_shape_bounds.size() != N || led.m_values.size() != N ||
      led.start_index.size() != N || led.count.size() != N)
    return R::fail("ledger columns have inconsistent lengths");

  auto d = derivative(led.f);
  if (!d) return R::fail("generator has no derivative in the catalog: " + d.error());

  Rational total_measure(0);
  for (unsigned long n = 1; n <= N; ++n) {
    const IntervalFamily& fam = led.families[n - 1];
    ExtendedValue mu = measure(fam);
    if (!mu.is_finite()) return R::fail("family measure not finite");
    if (!(mu.enclosure().hi <= led.budget.lower_at(n)))
      return R::fail("family " + std::to_string(n) + " exceeds its measure budget 1/n^2");
    total_measure += mu.enclosure().hi;

    IntegralResult ir = integral_abs_over(*d, fam, 1);
    if (!ir.value.is_finite()) return R::fail("family integral did not evaluate finitely");
    if (!(ir.value.enclosure().lo >= led.per_family_lower_bounds[n - 1]))
      return R::fail("recomputed integral over family " + std::to_string(n) +
                     " fell below the recorded lower bound");
    if (!(led.per_family_lower_bounds[n - 1] >= led.proof_shape_bounds[n - 1]))
      return R::fail("recorded bound is weaker than the epsilon*(1 - 1/n^2) shape");
    if (!(led.per_family_lower_bounds[n - 1] >= Rational(led.epsilon * (1 - inv_square(n)))))
      return R::fail("recorded bound misses the required epsilon*(1 - 1/n^2) threshold");
    if (!fam.head().empty() && !(fam.head().back().right <= led.cutoffs[n - 1]))
      return R::fail("cutoff does not dominate family " + std::to_string(n));
    rep.checks += 5;
  }

  // Pairwise disjointness across all families.
  std::vector<Interval> all = sorted_components(led.families);
  for (std::size_t i = 0; i + 1 < all.size(); ++i)
    if (all[i].overlaps(all[i + 1])) return R::fail("families are not pairwise disjoint");
  rep.checks += 1;

  // Union measure stays below the budget series sum.
  if (led.union_measure.lo != total_measure || led.union_measure.hi != total_measure)
    return R::fail("union measure does not match the recomputed total");
  Rational budget_partial(0);
  for (unsigned long n = 1; n <= N; ++n) budget_partial += inv_square(n);
  if (!(total_measure <= budget_partial))
    return R::fail("union measure exceeds the partial budget sum");
  rep.checks += 2;

  // The divergence certificate must re-fit from the recorded bounds.
  std::vector<std::pair<unsigned long, Rational>> entries;
  for (unsigned long n = 1; n <= N; ++n)
    entries.emplace_back(n, led.per_family_lower_bounds[n - 1]);
  auto fitted = divergence_by_comparison(entries);
  auto* cert = std::get_if<DivergenceCertificate>(&fitted);
  if (!cert) return R::fail("divergence certificate did not re-fit from the recorded bounds");
  if (!(cert->term.c > 0) || cert->term.p > 1)
    return R::fail("re-fitted comparison term is not divergent");
  rep.checks += 1;

  rep.summary = "re-checked " + std::to_string(N) +
                " families: budgets, integrals, disjointness, and divergence all confirmed";
  return R::ok(rep);
}

// ---------------------------------------------------------------------------
// Superlevel pieces with harmonic integral lower bounds

Result<Theorem2Ledger> theorem2_construction(const FuncPtr& f, unsigned long N,
                                             const classifier::Options& opts) {
  using R = Result<Theorem2Ledger>;
  if (!f) throw DomainError("theorem2_construction: null function");
  if (N == 0) throw DomainError("theorem2_construction: N must be at least 1");

  Verdict h = membership(f, SpaceId::L1H, opts);
  if (h.status == Status::In) {
    std::string msg = "not-applicable: f lies in L1_H";
    if (h.certificate) {
      if (const auto* t = std::get_if<ThresholdCert>(&*h.certificate))
        msg += " (finite superlevel measure at threshold M = " + to_string(t->threshold) + ")";
    }
    return R::fail(msg + "; the construction needs every superlevel infinite");
  }
  if (h.status == Status::Unknown)
    return R::fail("not-applicable: L1_H membership unresolved: " + h.reason);

  Theorem2Ledger led;
  led.f = f;
  Rational cutoff(0);
  BigInt prev_a(0);

  for (unsigned long n = 1; n <= N; ++n) {
    auto sl = superlevel(f, Rational(BigInt(n)));
    if (!sl) return R::fail("superlevel not representable at level " + std::to_string(n) +
                            ": " + sl.error());
    IntervalFamily region = restrict_beyond(*sl, cutoff);
    auto carved = carve_subfamily(region, inv_square(n));
    if (!carved)
      return R::fail("could not carve measure 1/n^2 beyond the previous support at level " +
                     std::to_string(n) + ": " + carved.error());
    IntervalFamily G = *carved;

    ExtendedValue mu = measure(G);
    if (!mu.is_finite())
      throw LatticeViolation("theorem2_construction: carved piece lacks finite measure");
    const Rational lo = mu.enclosure().lo;
    const Rational hi = mu.enclosure().hi;
    if (!(lo >= inv_square(n)) || !(hi <= Rational(2 * inv_square(n))))
      throw LatticeViolation("theorem2_construction: carved measure left [1/n^2, 2/n^2]");

    for (const Interval& iv : G.head())
      if (!sl->contains_interval(iv))
        throw LatticeViolation("theorem2_construction: carved piece left the superlevel set");

    const Rational bound(Rational(BigInt(n)) * lo);
    const Rational reach = sup_abs(G);
    cutoff = std::max(cutoff, reach);

    BigInt a = ceil_of(Rational(reach * 2 * BigInt(n) * n));
    if (a <= prev_a) a = prev_a + 1;
    prev_a = a;

    led.superlevels.push_back(*sl);
    led.window_indices.push_back(a);
    led.pieces.push_back(std::move(G));
    led.measures.push_back(mu.enclosure());
    led.integral_lower_bounds.push_back(bound);
  }
  return R::ok(led);
}

Result<VerificationReport> verify_ledger(const Theorem2Ledger& led,
                                         const classifier::Options& opts) {
  using R = Result<VerificationReport>;
  VerificationReport rep;
  const unsigned long N = led.pieces.size();
  if (N == 0) return R::fail("empty ledger");
  if (led.superlevels.size() != N || led.window_indices.size() != N ||
      led.measures.size() != N || led.integral_lower_bounds.size() != N)
    return R::fail("ledger columns have inconsistent lengths");

  Rational bound_sum(0);
  Rational harmonic(0);
  BigInt prev_a(0);
  for (unsigned long n = 1; n <= N; ++n) {
    const IntervalFamily& G = led.pieces[n - 1];

    auto sl = superlevel(led.f, Rational(BigInt(n)));
    if (!sl) return R::fail("superlevel not recomputable: " + sl.error());
    if (!(*sl == led.superlevels[n - 1]))
      return R::fail("stored superlevel set differs from the recomputed one at level " +
                     std::to_string(n));
    for (const Interval& iv : G.head())
      if (!sl->contains_interval(iv))
        return R::fail("piece " + std::to_string(n) + " is not inside its superlevel set");

    ExtendedValue mu = measure(G);
    if (!mu.is_finite()) return R::fail("piece measure not finite");
    if (mu.enclosure().lo != led.measures[n - 1].lo ||
        mu.enclosure().hi != led.measures[n - 1].hi)
      return R::fail("stored measure differs from the recomputed one");
    if (!(mu.enclosure().lo >= inv_square(n)) ||
        !(mu.enclosure().hi <= Rational(2 * inv_square(n))))
      return R::fail("piece measure left the [1/n^2, 2/n^2] window");

    const Rational& bound = led.integral_lower_bounds[n - 1];
    if (!(bound <= Rational(Rational(BigInt(n)) * mu.enclosure().lo)))
      return R::fail("recorded bound exceeds n * mu(G_n)");
    IntegralResult ir = integral_abs_over(led.f, G, opts.depth, opts.refine);
    if (!ir.value.is_finite()) return R::fail("piece integral did not evaluate finitely");
    if (!(ir.value.enclosure().lo >= bound))
      return R::fail("recomputed integral over piece " + std::to_string(n) +
                     " fell below the recorded bound");

    const BigInt& a = led.window_indices[n - 1];
    if (!(a > prev_a)) return R::fail("window indices are not strictly increasing");
    prev_a = a;
    Rational window(a, BigInt(2 * BigInt(n) * n));
    if (!(sup_abs(G) <= window))
      return R::fail("piece " + std::to_string(n) + " escapes its window [-a/(2n^2), a/(2n^2)]");

    bound_sum += bound;
    harmonic += Rational(BigInt(1), BigInt(n));
    rep.checks += 6;
  }

  std::vector<Interval> all = sorted_components(led.pieces);
  for (std::size_t i = 0; i + 1 < all.size(); ++i)
    if (all[i].overlaps(all[i + 1])) return R::fail("pieces are not pairwise disjoint");
  if (!(bound_sum >= harmonic))
    return R::fail("integral lower bounds sum below the harmonic number H_N");
  rep.checks += 2;

  rep.summary = "re-checked " + std::to_string(N) +
                " pieces: containment, measures, windows, integrals, and the harmonic sum "
                "all confirmed";
  return R::ok(rep);
}

}  // namespace witnesses
}  // namespace funcspace
