#include "funcspace/variation.hpp"

#include <algorithm>

namespace funcspace {
inline namespace functions {

namespace {

/// Divergence certificate for the variation blow-up next to a pole: walk
/// dyadic points t_k = eps/2^k (or eps/4^k) toward the pole and record exact
/// lower bounds for the per-gap variation |f(t_{k+1})| - |f(t_k)|. The gaps
/// grow geometrically, so they dominate a constant term.
ExtendedValue pole_cert(std::vector<std::pair<unsigned long, Rational>> gap_bounds,
                        const std::string& where) {
  auto fitted = divergence_by_comparison(gap_bounds);
  if (std::holds_alternative<DivergenceCertificate>(fitted)) {
    DivergenceCertificate cert = std::get<DivergenceCertificate>(std::move(fitted));
    cert.note = "variation along dyadic points approaching " + where + "; " + cert.note;
    return ExtendedValue::infinite(std::move(cert));
  }
  return ExtendedValue::unknown("pole variation fit failed near " + where);
}

/// Room available on either side of a pole at p inside [a, b].
Rational side_room(const Rational& p, const Rational& a, const Rational& b) {
  Rational right = b - p, left = p - a;
  Rational eps = std::max(right, left);
  if (eps > 1) eps = 1;
  return eps;
}

ExtendedValue reciprocal_like_pole(const Rational& e, const Rational& a, const Rational& b) {
  // |x|^e with e < 0 around 0: gaps between t_k = eps/2^k grow like 2^(-e k).
  Rational eps = side_room(0, a, b);
  Rational growth = pow_enclosure(2, -e).lo - 1;  // 2^(-e) - 1 > 0
  std::vector<std::pair<unsigned long, Rational>> gaps;
  for (unsigned long k = 1; k <= 8; ++k) {
    Rational tk = eps / pow_int(2, static_cast<long long>(k));
    Rational vlo = pow_enclosure(tk, e).lo;
    gaps.emplace_back(k, Rational(vlo * growth));
  }
  return pole_cert(std::move(gaps), "the pole at 0");
}

ExtendedValue sqrt_deriv_pole(const Rational& even_point, const Rational& a,
                              const Rational& b) {
  // |f'| = 1/(2 sqrt(t)) at t = eps/4^k: exact value 2^(k-1)/sqrt(eps).
  Rational eps = side_room(even_point, a, b);
  Rational inv_sqrt_lo = reciprocal(sqrt_enclosure(eps)).lo;
  std::vector<std::pair<unsigned long, Rational>> gaps;
  for (unsigned long k = 1; k <= 8; ++k) {
    Rational gap = pow_int(2, static_cast<long long>(k)) / Rational(4) * inv_sqrt_lo;
    gaps.emplace_back(k, gap);
  }
  return pole_cert(std::move(gaps), "the pole at " + to_string(even_point));
}

/// Variation of a continuous monotone-decomposable constructor: sum of
/// |f(p_{i+1}) - f(p_i)| over the partition.
ExtendedValue piecewise_variation(const FunctionSpec& f, const Partition& part) {
  Enclosure total = Enclosure::point(Rational(0));
  for (std::size_t i = 0; i + 1 < part.points.size(); ++i) {
    auto lo = evaluate(f, part.points[i]);
    auto hi = evaluate(f, part.points[i + 1]);
    if (!lo || !hi)
      return ExtendedValue::unknown("evaluation failed inside a monotone piece");
    total = total + abs_enclosure(*hi - *lo);
  }
  return ExtendedValue::finite(total);
}

/// Jump magnitudes of a step series seen inside [a, b]: each step edge is a
/// left-discontinuity counted on (a, b]; mirrored edges are
/// right-discontinuities counted on [a, b).
std::optional<Rational> step_jump_sum(const StepSeries& s, const Rational& a,
                                      const Rational& b) {
  const TailDescriptor& t = s.placement;
  Rational total = 0;
  for (unsigned long n = t.from_index;; ++n) {
    if (n > t.from_index + 1000000) return std::nullopt;  // scan cap reached
    Rational left = t.left.at(n);
    if (left > b && (!t.mirrored || Rational(-left) < a)) break;
    Rational height = abs_of(s.coef.value_at(n).lo);
    Rational right = left + t.width.lower_at(n);
    if (a < left && left <= b) total += height;
    if (a < right && right <= b) total += height;
    if (t.mirrored) {
      Rational ml = -right, mr = -left;
      if (a <= ml && ml < b) total += height;
      if (a <= mr && mr < b) total += height;
    }
  }
  return total;
}

/// Left/right limits of the periodic derivative used at piece boundaries:
/// at odd integers the one-sided limits are +1/2 (from the left) and -1/2
/// (from the right); elsewhere the function is continuous.
Result<Enclosure> sqrt_deriv_limit(const Rational& x, bool from_left) {
  if (den(x) == 1) {
    BigInt i = num(x);
    if (i % 2 != 0) return Result<Enclosure>::ok(
        Enclosure::point(from_left ? Rational(1, 2) : Rational(-1, 2)));
    return Result<Enclosure>::fail("pole");
  }
  return evaluate(FunctionSpec{SqrtPeriodicDeriv{}}, x);
}

ExtendedValue sqrt_deriv_variation(const Rational& a, const Rational& b) {
  // Pole when an even integer lies in [a, b].
  for (BigInt i = ceil_of(a); Rational(i) <= b; ++i)
    if (i % 2 == 0) return sqrt_deriv_pole(Rational(i), a, b);
  // Pieces split at interior odd integers; each jump contributes exactly 1.
  std::vector<Rational> pts{a};
  for (BigInt i = floor_of(a) + 1; Rational(i) < b; ++i) pts.push_back(Rational(i));
  pts.push_back(b);
  Enclosure total = Enclosure::point(Rational(0));
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    auto lo = sqrt_deriv_limit(pts[i], false);
    auto hi = sqrt_deriv_limit(pts[i + 1], true);
    if (!lo || !hi) return ExtendedValue::unknown("limit evaluation failed");
    total = total + abs_enclosure(*hi - *lo);
    if (i + 2 < pts.size()) total = total + Enclosure::point(Rational(1));  // jump
  }
  return ExtendedValue::finite(total);
}

bool sign_certain(const Enclosure& e, int& s) {
  if (e.lo > 0) { s = 1; return true; }
  if (e.hi < 0) { s = -1; return true; }
  if (e.lo == 0 && e.hi == 0) { s = 0; return true; }
  return false;
}

ExtendedValue sum_variation(const SumOf& s, const FunctionSpec& whole, const Rational& a,
                            const Rational& b);

ExtendedValue dispatch(const FunctionSpec& f, const Rational& a, const Rational& b) {
  struct Visitor {
    const FunctionSpec& f;
    const Rational& a;
    const Rational& b;
    ExtendedValue monotone_pieces() const {
      auto part = monotone_breakpoints(f, a, b);
      if (!part) return ExtendedValue::unknown(part.error());
      return piecewise_variation(f, *part);
    }
    ExtendedValue operator()(const Affine& af) const {
      return ExtendedValue::finite(Enclosure::point(Rational(abs_of(af.a) * (b - a))));
    }
    ExtendedValue operator()(const PowerAbs& p) const {
      bool pole_inside = a <= 0 && 0 <= b;
      if (p.e < 0 && pole_inside) return reciprocal_like_pole(p.e, a, b);
      if (p.e == 0) {
        if (!p.with_sign) return ExtendedValue::finite(Enclosure::point(Rational(0)));
        Rational jump = (a < 0 && 0 < b) ? 2 : 0;  // sign jumps -1 -> 1
        return ExtendedValue::finite(Enclosure::point(jump));
      }
      return monotone_pieces();
    }
    ExtendedValue operator()(const Reciprocal&) const {
      if (a <= 0 && 0 <= b) return reciprocal_like_pole(-1, a, b);
      return ExtendedValue::finite(
          Enclosure::point(Rational(abs_of(Rational(1) / b - Rational(1) / a))));
    }
    ExtendedValue operator()(const SqrtPeriodic&) const { return monotone_pieces(); }
    ExtendedValue operator()(const SqrtPeriodicDeriv&) const {
      return sqrt_deriv_variation(a, b);
    }
    ExtendedValue operator()(const StepSeries& st) const {
      auto jumps = step_jump_sum(st, a, b);
      if (!jumps)
        return ExtendedValue::unknown("step scan exhausted before clearing the range");
      return ExtendedValue::finite(Enclosure::point(*jumps));
    }
    ExtendedValue operator()(const Scale& sc) const {
      return ev_scale(abs_of(sc.r), dispatch(*sc.inner, a, b));
    }
    ExtendedValue operator()(const SumOf& su) const { return sum_variation(su, f, a, b); }
  };
  return std::visit(Visitor{f, a, b}, f.node);
}

ExtendedValue sum_variation(const SumOf& s, const FunctionSpec& whole, const Rational& a,
                            const Rational& b) {
  auto part = monotone_breakpoints(whole, a, b);
  if (part) {
    // Each summand is monotone between consecutive points, so its piece
    // variation is exactly |delta|. When the deltas certainly share a sign
    // the piece is exact; otherwise keep [|delta f|, |delta l| + |delta r|].
    Enclosure total = Enclosure::point(Rational(0));
    bool evaluable = true;
    for (std::size_t i = 0; i + 1 < part->points.size() && evaluable; ++i) {
      const Rational& p = part->points[i];
      const Rational& q = part->points[i + 1];
      auto lp = evaluate(*s.left, p), lq = evaluate(*s.left, q);
      auto rp = evaluate(*s.right, p), rq = evaluate(*s.right, q);
      if (!lp || !lq || !rp || !rq) {
        evaluable = false;
        break;
      }
      Enclosure dl = *lq - *lp, dr = *rq - *rp;
      Enclosure df = abs_enclosure(dl + dr);
      int sl = 0, sr = 0;
      bool aligned = sign_certain(dl, sl) && sign_certain(dr, sr) &&
                     (sl == 0 || sr == 0 || sl == sr);
      if (aligned) {
        total = total + df;
      } else {
        Enclosure upper = abs_enclosure(dl) + abs_enclosure(dr);
        total = total + Enclosure{df.lo, upper.hi, false};
      }
    }
    if (evaluable) return ExtendedValue::finite(total);
  }
  // Triangle fallback: |V(l) - V(r)| <= V(l+r) <= V(l) + V(r).
  ExtendedValue vl = dispatch(*s.left, a, b);
  ExtendedValue vr = dispatch(*s.right, a, b);
  if (vl.is_unknown()) return vl;
  if (vr.is_unknown()) return vr;
  if (vl.is_infinite() && vr.is_infinite())
    return ExtendedValue::unknown("both summands have infinite variation; they may cancel");
  if (vl.is_infinite() || vr.is_infinite()) {
    DivergenceCertificate cert =
        (vl.is_infinite() ? vl : vr).certificate();
    cert.note = "summand with infinite variation dominates (triangle inequality, the "
                "other summand's variation is finite); " + cert.note;
    return ExtendedValue::infinite(std::move(cert));
  }
  const Enclosure& el = vl.enclosure();
  const Enclosure& er = vr.enclosure();
  Rational lo = std::max(Rational(0), std::max(Rational(el.lo - er.hi), Rational(er.lo - el.hi)));
  return ExtendedValue::finite(Enclosure{lo, Rational(el.hi + er.hi), false});
}

}  // namespace

ExtendedValue total_variation(const FunctionSpec& f, const Rational& a, const Rational& b) {
  if (a >= b) throw DomainError("total_variation: need a < b");
  return dispatch(f, a, b);
}

}  // namespace functions
}  // namespace funcspace
