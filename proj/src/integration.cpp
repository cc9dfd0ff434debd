#include "funcspace/integration.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace funcspace {
inline namespace functions {
namespace {

constexpr unsigned long kScanCap = 2'000'000;

// ---------------------------------------------------------------------------
// Small accumulators.

/// Exact enclosure accumulation with periodic outward rounding so that long
/// inexact chains do not blow up denominators. The 2^-128 grid penalty is far
/// below every tolerance in play.
struct Accum {
  Enclosure total{Rational(0), Rational(0), true};
  unsigned inexact_adds = 0;

  void add(const Enclosure& e) {
    total = total + e;
    if (!e.exact && ++inexact_adds % 64 == 0) total = round_outward(total, 128);
  }
};

Enclosure clip_nonneg(Enclosure e) {
  if (e.lo < 0) return Enclosure::bounds(Rational(0), e.hi);
  return e;
}

/// Builds a proven-infinite value from positive per-region integral lower
/// bounds (disjoint regions, so their sum bounds the integral from below).
ExtendedValue infinite_from_entries(
    const std::vector<std::pair<unsigned long, Rational>>& entries,
    const std::string& note) {
  if (entries.size() < 4) {
    return ExtendedValue::unknown("too few usable shell bounds: " + note);
  }
  auto fitted = divergence_by_comparison(entries);
  if (auto* cert = std::get_if<DivergenceCertificate>(&fitted)) {
    DivergenceCertificate c = *cert;
    c.note = note + (c.note.empty() ? "" : "; " + c.note);
    return ExtendedValue::infinite(std::move(c));
  }
  return ExtendedValue::unknown("shell bounds rejected by the comparison rule: " +
                                std::get<ComparisonRejection>(fitted).reason);
}

/// |f| + |g| knowledge combined into knowledge about |f + g| on the same
/// region: reverse triangle below, triangle above. Divergence survives the
/// addition of a finitely-bounded summand; two divergent summands may cancel.
ExtendedValue combine_abs_sum(const ExtendedValue& a, const ExtendedValue& b) {
  if (a.is_unknown()) return a;
  if (b.is_unknown()) return b;
  if (a.is_infinite() && b.is_infinite()) {
    return ExtendedValue::unknown(
        "both summands have divergent integrals; their sum may cancel, so no "
        "certificate is available either way");
  }
  if (a.is_infinite() || b.is_infinite()) {
    const ExtendedValue& inf = a.is_infinite() ? a : b;
    const ExtendedValue& fin = a.is_infinite() ? b : a;
    DivergenceCertificate cert = inf.certificate();
    cert.checked_prefix.clear();
    cert.note += "; the other summand contributes at most " +
                 to_string(fin.enclosure().hi) +
                 " in absolute value, which cannot cancel the divergence";
    return ExtendedValue::infinite(std::move(cert));
  }
  const Enclosure& ea = a.enclosure();
  const Enclosure& eb = b.enclosure();
  Rational lo = Rational(0);
  Rational cand1 = ea.lo - eb.hi;
  Rational cand2 = eb.lo - ea.hi;
  if (cand1 > lo) lo = cand1;
  if (cand2 > lo) lo = cand2;
  return ExtendedValue::finite(Enclosure::bounds(lo, Rational(ea.hi + eb.hi)));
}

// ---------------------------------------------------------------------------
// Affine pieces.

Rational affine_signed_integral(const Rational& a, const Rational& b, const Rational& p,
                                const Rational& q) {
  return Rational(a * (q * q - p * p) / 2 + b * (q - p));
}

ExtendedValue affine_abs_integral(const Rational& a, const Rational& b, const Rational& l,
                                  const Rational& r) {
  if (a == 0) return ExtendedValue::finite(Enclosure::point(Rational(abs_of(b) * (r - l))));
  std::vector<Rational> pts{l};
  Rational root = Rational(-b / a);
  if (l < root && root < r) pts.push_back(root);
  pts.push_back(r);
  Rational total = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    total += abs_of(affine_signed_integral(a, b, pts[i], pts[i + 1]));
  }
  return ExtendedValue::finite(Enclosure::point(total));
}

// ---------------------------------------------------------------------------
// Power pieces |x|^e on one side of the pole.

/// One-sided dyadic shells against the pole at 0: with room h on the side,
/// shell k = [h/2^k, h/2^(k-1)] gives integral >= (h/2^k) * (h/2^(k-1))^e for
/// decreasing integrands (e < 0). Constant for e = -1, growing for e < -1.
ExtendedValue pole_shell_integral(const Rational& e, const Rational& room,
                                  const std::string& where, const RefineOpts& opts) {
  Rational h = room < 1 ? room : Rational(1);
  std::vector<std::pair<unsigned long, Rational>> entries;
  Rational inner = Rational(h / 2);   // h / 2^k
  Rational outer = h;                 // h / 2^(k-1)
  for (unsigned long k = 1; k <= 8; ++k) {
    Rational height_lo = pow_enclosure(outer, e, opts.root_tol).lo;
    Rational len = Rational(outer - inner);
    Rational entry = Rational(len * height_lo);
    if (entry > 0) entries.push_back({k, entry});
    outer = inner;
    inner /= 2;
  }
  return infinite_from_entries(
      entries, "dyadic shells approaching the non-integrable pole " + where);
}

/// Riemann bracket of the integral of 1/x over [l, r] with 0 < l < r. Exact
/// rational endpoint samples; accumulation on a fixed 2^-56 grid keeps the
/// arithmetic cheap at large subdivision counts.
Enclosure riemann_reciprocal(const Rational& l, const Rational& r, const RefineOpts& opts) {
  Rational est = Rational((Rational(1) / l - Rational(1) / r) * (r - l));
  unsigned long pieces = 1;
  if (est > 0) {
    BigInt k = ceil_of(Rational(est / opts.riemann_target));
    if (k > BigInt(opts.riemann_cap)) {
      pieces = opts.riemann_cap;
    } else if (k > 1) {
      pieces = k.convert_to<unsigned long>();
    }
  }
  const Rational delta = Rational((r - l) / BigInt(pieces));
  const BigInt unit = BigInt(1) << 56;
  BigInt lo_units = 0;
  BigInt hi_units = 0;
  Rational x = l;
  for (unsigned long i = 0; i < pieces; ++i) {
    Rational next = Rational(x + delta);
    lo_units += floor_of(Rational(delta / next * unit));
    hi_units += ceil_of(Rational(delta / x * unit));
    x = next;
  }
  return Enclosure::bounds(Rational(lo_units, unit), Rational(hi_units, unit));
}

/// Integral of x^e over [l, r] with 0 <= l < r (the nonnegative side after
/// reflecting |x|^e). Finite brackets use the antiderivative x^(e+1)/(e+1);
/// e = -1 with l > 0 has no rational antiderivative and takes the Riemann
/// bracket; e <= -1 touching 0 is proven infinite by shells.
ExtendedValue power_side(const Rational& e, const Rational& l, const Rational& r,
                         const RefineOpts& opts) {
  if (l >= r) return ExtendedValue::finite(Enclosure::point(Rational(0)));
  if (e == 0) return ExtendedValue::finite(Enclosure::point(Rational(r - l)));
  Rational ep1 = Rational(e + 1);
  if (e > -1) {
    Enclosure fr = pow_enclosure(r, ep1, opts.root_tol);
    Enclosure fl = l == 0 ? Enclosure::point(Rational(0)) : pow_enclosure(l, ep1, opts.root_tol);
    return ExtendedValue::finite(clip_nonneg(scale(Rational(1) / ep1, fr - fl)));
  }
  if (l == 0) {
    return pole_shell_integral(e, r, "at 0 (exponent " + to_string(e) + ")", opts);
  }
  if (e == -1) return ExtendedValue::finite(riemann_reciprocal(l, r, opts));
  Enclosure fr = pow_enclosure(r, ep1, opts.root_tol);
  Enclosure fl = pow_enclosure(l, ep1, opts.root_tol);
  return ExtendedValue::finite(clip_nonneg(scale(Rational(1) / ep1, fr - fl)));
}

/// |x|^e over an arbitrary interval: reflect the negative side onto [0, inf).
ExtendedValue power_abs_integral(const Rational& e, const Rational& l, const Rational& r,
                                 const RefineOpts& opts) {
  if (r <= 0) return power_side(e, Rational(-r), Rational(-l), opts);
  if (l >= 0) return power_side(e, l, r, opts);
  return ev_add(power_side(e, Rational(0), Rational(-l), opts),
                power_side(e, Rational(0), r, opts));
}

// ---------------------------------------------------------------------------
// The 2-periodic sqrt and its derivative.

/// Piece within one window and one side of its center: t spans [tlo, thi]
/// inside [0, 1]. sqrt integrand: (2/3) t^(3/2); derivative magnitude
/// 1/(2 sqrt t): antiderivative sqrt t (the pole at t = 0 is integrable).
Enclosure periodic_side_piece(bool deriv, const Rational& tlo, const Rational& thi,
                              const RefineOpts& opts) {
  if (deriv) {
    Enclosure hi_v = sqrt_enclosure(thi, opts.root_tol);
    Enclosure lo_v = tlo == 0 ? Enclosure::point(Rational(0)) : sqrt_enclosure(tlo, opts.root_tol);
    return clip_nonneg(hi_v - lo_v);
  }
  Enclosure hi_v = pow_enclosure(thi, Rational(3, 2), opts.root_tol);
  Enclosure lo_v =
      tlo == 0 ? Enclosure::point(Rational(0)) : pow_enclosure(tlo, Rational(3, 2), opts.root_tol);
  return clip_nonneg(scale(Rational(2, 3), hi_v - lo_v));
}

/// Piece containing no odd integer in its interior (single window): split at
/// the center when it is interior, then integrate per monotone side.
Enclosure periodic_window_piece(bool deriv, const Rational& p, const Rational& q,
                                const RefineOpts& opts) {
  // Even integers strictly inside [p, q].
  std::vector<Rational> pts{p};
  BigInt n = ceil_of(p);
  if (Rational(n) == p) ++n;
  for (; Rational(n) < q; ++n) {
    if (n % 2 == 0) pts.push_back(Rational(n));
  }
  pts.push_back(q);
  Accum acc;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Rational& u = pts[i];
    const Rational& v = pts[i + 1];
    Rational mid = Rational((u + v) / 2);
    Rational center = Rational(2 * floor_of(Rational((mid + 1) / 2)));
    Rational a = abs_of(Rational(u - center));
    Rational b = abs_of(Rational(v - center));
    Rational tlo = a < b ? a : b;
    Rational thi = a < b ? b : a;
    acc.add(periodic_side_piece(deriv, tlo, thi, opts));
  }
  return acc.total;
}

/// Full-line periodic integral over [l, r]: whole periods contribute the
/// exact per-period constant (4/3 for the sqrt, 2 for its derivative), edge
/// pieces go through the window decomposition.
ExtendedValue periodic_integral(bool deriv, const Rational& l, const Rational& r,
                                const RefineOpts& opts) {
  // Smallest odd integer >= l and largest odd integer <= r.
  BigInt c1 = ceil_of(l);
  if (c1 % 2 == 0) ++c1;
  BigInt c2 = floor_of(r);
  if (c2 % 2 == 0) --c2;
  Accum acc;
  if (c1 >= c2 || Rational(c1) < l || Rational(c2) > r) {
    // Fewer than one full period: at most one interior odd breakpoint.
    std::vector<Rational> pts{l};
    for (BigInt n = ceil_of(l); Rational(n) < r; ++n) {
      if (n % 2 != 0 && Rational(n) > l) pts.push_back(Rational(n));
    }
    pts.push_back(r);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      acc.add(periodic_window_piece(deriv, pts[i], pts[i + 1], opts));
    }
    return ExtendedValue::finite(acc.total);
  }
  Rational per_period = deriv ? Rational(2) : Rational(4, 3);
  Rational full = Rational(per_period * ((c2 - c1) / 2));
  acc.add(Enclosure::point(full));
  if (l < Rational(c1)) acc.add(periodic_window_piece(deriv, l, Rational(c1), opts));
  if (Rational(c2) < r) acc.add(periodic_window_piece(deriv, Rational(c2), r, opts));
  return ExtendedValue::finite(acc.total);
}

// ---------------------------------------------------------------------------
// Step series.

Rational overlap_length(const Interval& iv, const Rational& l, const Rational& r) {
  Rational lo = iv.left > l ? iv.left : l;
  Rational hi = iv.right < r ? iv.right : r;
  return hi > lo ? Rational(hi - lo) : Rational(0);
}

ExtendedValue step_on_interval(const StepSeries& s, const Rational& l, const Rational& r) {
  const TailDescriptor& t = s.placement;
  Rational reach = abs_of(l) > abs_of(r) ? abs_of(l) : abs_of(r);
  Rational total = 0;
  for (unsigned long n = t.from_index;; ++n) {
    if (n > t.from_index + kScanCap) {
      return ExtendedValue::unknown("step scan exhausted before clearing the interval");
    }
    Rational a = t.left.at(n);
    if (a > r && (!t.mirrored || a > reach)) break;
    Enclosure h = s.coef.value_at(n);  // integer exponent: exact
    Rational height = abs_of(h.lo);
    total += height * overlap_length(t.interval_at(n), l, r);
    if (t.mirrored) total += height * overlap_length(t.mirrored_interval_at(n), l, r);
  }
  return ExtendedValue::finite(Enclosure::point(total));
}

// ---------------------------------------------------------------------------
// Sums: sign-resolved pieces with adaptive bisection.

ExtendedValue sum_coarse(const SumOf& s, const Interval& piece, const RefineOpts& opts) {
  return combine_abs_sum(integral_abs_on_interval(*s.left, piece, opts),
                         integral_abs_on_interval(*s.right, piece, opts));
}

ExtendedValue sum_piece(const SumOf& s, const Rational& p, const Rational& q,
                        unsigned splits_left, const RefineOpts& opts) {
  Interval piece{p, q, true, false};
  auto lp = evaluate(*s.left, p);
  auto lq = evaluate(*s.left, q);
  auto rp = evaluate(*s.right, p);
  auto rq = evaluate(*s.right, q);
  if (lp && lq && rp && rq) {
    // Both summands are monotone on [p, q], so endpoint hulls are ranges.
    Enclosure range_l = hull(*lp, *lq);
    Enclosure range_r = hull(*rp, *rq);
    bool both_nonneg = range_l.lo >= 0 && range_r.lo >= 0;
    bool both_nonpos = range_l.hi <= 0 && range_r.hi <= 0;
    if (both_nonneg || both_nonpos) {
      // Aligned signs: |f + g| = |f| + |g| throughout the piece.
      return ev_add(integral_abs_on_interval(*s.left, piece, opts),
                    integral_abs_on_interval(*s.right, piece, opts));
    }
  }
  if (splits_left == 0) return sum_coarse(s, piece, opts);
  Rational mid = Rational((p + q) / 2);
  return ev_add(sum_piece(s, p, mid, splits_left - 1, opts),
                sum_piece(s, mid, q, splits_left - 1, opts));
}

ExtendedValue sum_on_interval(const FunctionSpec& whole, const SumOf& s, const Rational& l,
                              const Rational& r, const RefineOpts& opts) {
  auto part = monotone_breakpoints(whole, l, r);
  if (!part) {
    // No monotone decomposition (step summand or pole inside): fall back to
    // the triangle bracket; a pole makes one side proven infinite anyway.
    return sum_coarse(s, Interval{l, r, true, false}, opts);
  }
  ExtendedValue out = ExtendedValue::finite(Enclosure::point(Rational(0)));
  for (std::size_t i = 0; i + 1 < part->points.size(); ++i) {
    out = ev_add(out, sum_piece(s, part->points[i], part->points[i + 1], opts.max_splits, opts));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

ExtendedValue integral_abs_on_interval(const FunctionSpec& f, const Interval& iv,
                                       const RefineOpts& opts) {
  if (iv.left > iv.right) throw DomainError("integral over reversed interval");
  if (iv.is_degenerate()) return ExtendedValue::finite(Enclosure::point(Rational(0)));
  const Rational& l = iv.left;
  const Rational& r = iv.right;
  return std::visit(
      [&](const auto& node) -> ExtendedValue {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Affine>) {
          return affine_abs_integral(node.a, node.b, l, r);
        } else if constexpr (std::is_same_v<T, PowerAbs>) {
          return power_abs_integral(node.e, l, r, opts);  // sign factor drops under |.|
        } else if constexpr (std::is_same_v<T, Reciprocal>) {
          return power_abs_integral(Rational(-1), l, r, opts);
        } else if constexpr (std::is_same_v<T, SqrtPeriodic>) {
          return periodic_integral(false, l, r, opts);
        } else if constexpr (std::is_same_v<T, SqrtPeriodicDeriv>) {
          return periodic_integral(true, l, r, opts);
        } else if constexpr (std::is_same_v<T, StepSeries>) {
          return step_on_interval(node, l, r);
        } else if constexpr (std::is_same_v<T, Scale>) {
          return ev_scale(abs_of(node.r), integral_abs_on_interval(*node.inner, iv, opts));
        } else {
          return sum_on_interval(f, node, l, r, opts);
        }
      },
      f.node);
}

namespace {

// ---------------------------------------------------------------------------
// Rays.

ExtendedValue ray_core(const FunctionSpec& f, const Rational& E, const RefineOpts& opts);

/// Positive-side step contributions over [T, inf): skip blocks fully below T,
/// split the single straddling block exactly, close the rest symbolically as
/// the series sum of |c(n)| * w(n) (a single power term in n).
ExtendedValue step_side_over_threshold(const StepSeries& s, const Rational& T) {
  const TailDescriptor& t = s.placement;
  unsigned long n = t.from_index;
  Rational partial = 0;
  for (;; ++n) {
    if (n > t.from_index + kScanCap) {
      return ExtendedValue::unknown("step scan exhausted before reaching the ray");
    }
    Interval iv = t.interval_at(n);
    if (iv.right <= T) continue;  // fully below the ray
    if (iv.left < T) {
      Enclosure h = s.coef.value_at(n);
      partial = Rational(abs_of(h.lo) * (iv.right - T));
      ++n;
    }
    break;
  }
  SeqTerm product{Rational(abs_of(s.coef.c) * t.width.c), Rational(s.coef.p + t.width.p)};
  ExtendedValue rest = series_tail(product, n);
  if (rest.is_infinite()) {
    DivergenceCertificate cert = rest.certificate();
    cert.note = "step blocks on the ray carry the divergent mass " + to_string(product) +
                (cert.note.empty() ? "" : "; " + cert.note);
    rest = ExtendedValue::infinite(std::move(cert));
  }
  return ev_add(ExtendedValue::finite(Enclosure::point(partial)), rest);
}

/// Finite count of positive-side blocks meeting (-inf, T]; exact sum.
/// nullopt when the scan cap is reached before clearing T.
std::optional<Rational> step_side_below_threshold(const StepSeries& s, const Rational& T) {
  const TailDescriptor& t = s.placement;
  Rational total = 0;
  for (unsigned long n = t.from_index;; ++n) {
    if (n > t.from_index + kScanCap) return std::nullopt;
    Interval iv = t.interval_at(n);
    if (iv.left > T) break;  // left endpoints increase
    Enclosure h = s.coef.value_at(n);
    Rational cut = iv.right < T ? iv.right : T;
    if (cut > iv.left) total += abs_of(h.lo) * (cut - iv.left);
  }
  return total;
}

ExtendedValue step_ray(const StepSeries& s, const Rational& E, bool positive_dir) {
  if (positive_dir) {
    ExtendedValue main = step_side_over_threshold(s, E);
    if (s.placement.mirrored) {
      // Mirrored blocks (-a-w, -a] meeting [E, inf): finitely many, exactly
      // the positive-side blocks meeting (-inf, -E] after reflection.
      auto mirror_part = step_side_below_threshold(s, Rational(-E));
      if (!mirror_part) {
        return ExtendedValue::unknown("step scan exhausted before clearing the ray");
      }
      main = ev_add(main, ExtendedValue::finite(Enclosure::point(*mirror_part)));
    }
    return main;
  }
  // Ray (-inf, E]: positive-side blocks contribute finitely; mirrored blocks
  // reflect onto the positive side over [-E, inf).
  auto direct = step_side_below_threshold(s, E);
  if (!direct) return ExtendedValue::unknown("step scan exhausted before clearing the ray");
  ExtendedValue out = ExtendedValue::finite(Enclosure::point(*direct));
  if (s.placement.mirrored) {
    out = ev_add(out, step_side_over_threshold(s, Rational(-E)));
  }
  return out;
}

/// Core ray integral for a single non-sum constructor, direction [E, inf).
ExtendedValue ray_core(const FunctionSpec& f, const Rational& E, const RefineOpts& opts) {
  return std::visit(
      [&](const auto& node) -> ExtendedValue {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Affine>) {
          if (node.a == 0 && node.b == 0) {
            return ExtendedValue::finite(Enclosure::point(Rational(0)));
          }
          std::vector<std::pair<unsigned long, Rational>> entries;
          if (node.a == 0) {
            for (unsigned long k = 1; k <= 8; ++k) entries.push_back({k, abs_of(node.b)});
            return infinite_from_entries(
                entries, "constant magnitude " + to_string(abs_of(node.b)) +
                             " on every unit shell of the ray");
          }
          Rational root = Rational(-node.b / node.a);
          Rational start = root + 1 > E ? Rational(root + 1) : E;
          for (unsigned long k = 1; k <= 8; ++k) {
            Rational lo_pt = Rational(start + BigInt(k - 1));
            Rational hi_pt = Rational(start + BigInt(k));
            Rational v1 = abs_of(Rational(node.a * lo_pt + node.b));
            Rational v2 = abs_of(Rational(node.a * hi_pt + node.b));
            entries.push_back({k, v1 < v2 ? v1 : v2});
          }
          return infinite_from_entries(entries,
                                       "unit shells of the ray past the root of the line");
        } else if constexpr (std::is_same_v<T, PowerAbs> || std::is_same_v<T, Reciprocal>) {
          Rational e = Rational(-1);
          if constexpr (std::is_same_v<T, PowerAbs>) e = node.e;
          // E >= 1 is arranged by the caller.
          std::vector<std::pair<unsigned long, Rational>> entries;
          if (e == 0) {
            for (unsigned long k = 1; k <= 8; ++k) entries.push_back({k, Rational(1)});
            return infinite_from_entries(entries, "unit magnitude on every shell of the ray");
          }
          if (e > 0) {
            for (unsigned long k = 1; k <= 8; ++k) {
              Rational lo_pt = Rational(E + BigInt(k - 1));
              Rational v = pow_enclosure(lo_pt, e, opts.root_tol).lo;
              if (v > 0) entries.push_back({k, v});
            }
            return infinite_from_entries(entries, "growing magnitude on unit shells of the ray");
          }
          if (e < -1) {
            // Finite: integral = E^(e+1) / (-(e+1)).
            Enclosure head = pow_enclosure(E, Rational(e + 1), opts.root_tol);
            return ExtendedValue::finite(
                clip_nonneg(scale(Rational(Rational(-1) / (e + 1)), head)));
          }
          // e in [-1, 0): doubling shells [E 2^(k-1), E 2^k].
          Rational lo_pt = E;
          for (unsigned long k = 1; k <= 8; ++k) {
            Rational hi_pt = Rational(lo_pt * 2);
            Rational height = pow_enclosure(hi_pt, e, opts.root_tol).lo;
            Rational entry = Rational((hi_pt - lo_pt) * height);
            if (entry > 0) entries.push_back({k, entry});
            lo_pt = hi_pt;
          }
          return infinite_from_entries(entries,
                                       "doubling shells of the ray with slowly decaying "
                                       "magnitude (exponent " +
                                           to_string(e) + ")");
        } else if constexpr (std::is_same_v<T, SqrtPeriodic> ||
                             std::is_same_v<T, SqrtPeriodicDeriv>) {
          bool deriv = std::is_same_v<T, SqrtPeriodicDeriv>;
          Rational per = deriv ? Rational(2) : Rational(4, 3);
          std::vector<std::pair<unsigned long, Rational>> entries;
          for (unsigned long k = 1; k <= 8; ++k) entries.push_back({k, per});
          return infinite_from_entries(
              entries, "every full period on the ray contributes exactly " + to_string(per));
        } else if constexpr (std::is_same_v<T, StepSeries>) {
          return step_ray(node, E, true);
        } else if constexpr (std::is_same_v<T, Scale>) {
          return ev_scale(abs_of(node.r), ray_core(*node.inner, E, opts));
        } else {
          return combine_abs_sum(ray_core(*node.left, E, opts),
                                 ray_core(*node.right, E, opts));
        }
      },
      f.node);
}

/// |f(-x)| = |g(x)| for a reflected catalog base: only the affine slope
/// flips; every other base constructor has even absolute value.
FunctionSpec reflect_for_abs(const FunctionSpec& f) {
  if (const auto* aff = std::get_if<Affine>(&f.node)) {
    return FunctionSpec{Affine{Rational(-aff->a), aff->b}};
  }
  return f;
}

ExtendedValue ray_integral(const FunctionSpec& f, const Rational& endpoint, bool positive_dir,
                           const RefineOpts& opts) {
  // Sums and scales decompose structurally so reflection only ever touches
  // base constructors.
  if (const auto* sum = std::get_if<SumOf>(&f.node)) {
    return combine_abs_sum(ray_integral(*sum->left, endpoint, positive_dir, opts),
                           ray_integral(*sum->right, endpoint, positive_dir, opts));
  }
  if (const auto* sc = std::get_if<Scale>(&f.node)) {
    return ev_scale(abs_of(sc->r), ray_integral(*sc->inner, endpoint, positive_dir, opts));
  }
  if (std::get_if<StepSeries>(&f.node)) {
    const auto& s = std::get<StepSeries>(f.node);
    return step_ray(s, endpoint, positive_dir);
  }
  FunctionSpec base = positive_dir ? f : reflect_for_abs(f);
  Rational E = positive_dir ? endpoint : Rational(-endpoint);
  // Bridge past the pole/corner zone around 0 so shell arguments start clean.
  if (E < 1) {
    Interval bridge{E, Rational(1), true, false};
    return ev_add(integral_abs_on_interval(base, bridge, opts),
                  ray_core(base, Rational(1), opts));
  }
  return ray_core(base, E, opts);
}

// ---------------------------------------------------------------------------
// Symbolic tail bounds beyond the materialized depth.

bool is_even_integer(const Rational& r) {
  return den(r) == 1 && num(r) % 2 == 0;
}

std::optional<Rational> sup_bound(const FunctionSpec& f);

/// Upper bound for sum over n >= from of the block integrals, when a closed
/// form is recognized. factor multiplies the integrand (|r| chain of scales).
std::optional<Rational> tail_bound_beyond(const FunctionSpec& f, const TailDescriptor& t,
                                          unsigned long from, const RefineOpts& opts) {
  Rational factor = 1;
  const FunctionSpec* core = &f;
  while (const auto* sc = std::get_if<Scale>(&core->node)) {
    factor *= abs_of(sc->r);
    core = sc->inner.get();
  }
  Rational mirror_mult = t.mirrored ? Rational(2) : Rational(1);

  auto close = [&](const SeqTerm& term) -> std::optional<Rational> {
    ExtendedValue tail = series_tail(term, from);
    if (!tail.is_finite()) return std::nullopt;
    return tail.enclosure().hi;
  };

  if (std::get_if<SqrtPeriodicDeriv>(&core->node)) {
    // Blocks anchored at even integers: integral over [a, a+w] of the
    // derivative magnitude equals sqrt(w) when the block stays inside the
    // half-window (w <= 1); the mirrored block around -a matches by symmetry.
    bool even_aligned = t.left.quad == 0 ? (is_even_integer(t.left.lin) && is_even_integer(t.left.cst))
                                         : (is_even_integer(t.left.quad) &&
                                            is_even_integer(t.left.lin) && is_even_integer(t.left.cst));
    if (even_aligned && t.width.value_at(from).hi <= 1 && t.width.p > 2) {
      Rational c_hi = sqrt_enclosure(t.width.c, opts.root_tol).hi;
      return close(SeqTerm{Rational(factor * mirror_mult * c_hi), Rational(t.width.p / 2)});
    }
    return std::nullopt;
  }
  if (const auto* st = std::get_if<StepSeries>(&core->node)) {
    const TailDescriptor& p = st->placement;
    bool same_maps = p.left.quad == t.left.quad && p.left.lin == t.left.lin &&
                     p.left.cst == t.left.cst && p.width.c == t.width.c && p.width.p == t.width.p;
    bool mirror_ok = !t.mirrored || p.mirrored;
    if (same_maps && mirror_ok && t.from_index >= p.from_index) {
      // Each block meets exactly its own step: contribution |c(n)| w(n).
      Rational total_p = Rational(st->coef.p + t.width.p);
      if (total_p > 1) {
        return close(SeqTerm{Rational(factor * mirror_mult * abs_of(st->coef.c) * t.width.c),
                             total_p});
      }
    }
    return std::nullopt;
  }
  if (auto m = sup_bound(*core)) {
    if (t.width.p > 1) {
      return close(SeqTerm{Rational(factor * mirror_mult * *m * t.width.c), t.width.p});
    }
  }
  return std::nullopt;
}

/// Supremum of |f| over the whole line, when finite and recognizable.
std::optional<Rational> sup_bound(const FunctionSpec& f) {
  return std::visit(
      [&](const auto& node) -> std::optional<Rational> {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Affine>) {
          if (node.a == 0) return abs_of(node.b);
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, PowerAbs>) {
          if (node.e == 0) return Rational(1);  // sign or the constant 1
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, SqrtPeriodic>) {
          return Rational(1);
        } else if constexpr (std::is_same_v<T, StepSeries>) {
          if (node.coef.p < 0) return std::nullopt;  // growing step heights
          Enclosure h = node.coef.value_at(node.placement.from_index);
          Rational m1 = abs_of(h.lo);
          Rational m2 = abs_of(h.hi);
          return m1 > m2 ? m1 : m2;
        } else if constexpr (std::is_same_v<T, Scale>) {
          if (auto inner = sup_bound(*node.inner)) return Rational(abs_of(node.r) * *inner);
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, SumOf>) {
          auto l = sup_bound(*node.left);
          auto r = sup_bound(*node.right);
          if (l && r) return Rational(*l + *r);
          return std::nullopt;
        } else {
          return std::nullopt;  // reciprocal-like poles, periodic derivative
        }
      },
      f.node);
}

struct TailOutcome {
  ExtendedValue value = ExtendedValue::unknown("unset");
  std::vector<std::pair<unsigned long, Rational>> ledger;
};

TailOutcome tail_integral(const FunctionSpec& f, const TailDescriptor& t, unsigned long depth,
                          const RefineOpts& opts) {
  TailOutcome out;
  Accum acc;
  Rational running_lo = 0;
  std::vector<std::pair<unsigned long, Rational>> lows;
  bool all_positive = true;
  if (depth == 0) depth = 1;
  for (unsigned long k = 0; k < depth; ++k) {
    unsigned long n = t.from_index + k;
    ExtendedValue block = integral_abs_on_interval(f, t.interval_at(n), opts);
    if (t.mirrored) {
      block = ev_add(block, integral_abs_on_interval(f, t.mirrored_interval_at(n), opts));
    }
    if (block.is_infinite()) {
      DivergenceCertificate cert = block.certificate();
      cert.note += " (inside tail block index " + std::to_string(n) + ")";
      out.value = ExtendedValue::infinite(std::move(cert));
      return out;
    }
    if (block.is_unknown()) {
      out.value = block;
      return out;
    }
    const Enclosure& enc = block.enclosure();
    running_lo += enc.lo;
    out.ledger.push_back({n, running_lo});
    if (enc.lo > 0) {
      lows.push_back({n, enc.lo});
    } else {
      all_positive = false;
    }
    acc.add(enc);
  }
  if (all_positive && lows.size() >= 4) {
    auto fitted = divergence_by_comparison(lows);
    if (auto* cert = std::get_if<DivergenceCertificate>(&fitted)) {
      DivergenceCertificate c = *cert;
      c.note = "per-block integral lower bounds dominate a divergent series" +
               (c.note.empty() ? std::string() : "; " + c.note);
      out.value = ExtendedValue::infinite(std::move(c));
      return out;
    }
  }
  unsigned long next = t.from_index + depth;
  if (auto rest_hi = tail_bound_beyond(f, t, next, opts)) {
    out.value = ExtendedValue::finite(
        Enclosure::bounds(acc.total.lo, Rational(acc.total.hi + *rest_hi)));
    return out;
  }
  out.value = ExtendedValue::unknown(
      "tail blocks from index " + std::to_string(next) +
      " were neither certified divergent nor closed by a recognized bound");
  return out;
}

}  // namespace

IntegralResult integral_abs_over(const FunctionSpec& f, const IntervalFamily& fam,
                                 unsigned long depth, const RefineOpts& opts) {
  IntegralResult out;
  out.value = ExtendedValue::finite(Enclosure::point(Rational(0)));
  for (const Interval& iv : fam.head()) {
    out.value = ev_add(out.value, integral_abs_on_interval(f, iv, opts));
  }
  if (fam.tail()) {
    TailOutcome tail = tail_integral(f, *fam.tail(), depth, opts);
    out.ledger = std::move(tail.ledger);
    out.value = ev_add(out.value, tail.value);
  }
  if (fam.neg_ray()) {
    out.value = ev_add(out.value, ray_integral(f, fam.neg_ray()->endpoint, false, opts));
  }
  if (fam.pos_ray()) {
    out.value = ev_add(out.value, ray_integral(f, fam.pos_ray()->endpoint, true, opts));
  }
  return out;
}

}  // namespace functions
}  // namespace funcspace
