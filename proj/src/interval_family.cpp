#include "funcspace/interval_family.hpp"

#include <algorithm>

#include "funcspace/errors.hpp"

namespace funcspace {
inline namespace sets {

bool Interval::contains(const Rational& x) const {
  if (x < left || x > right) return false;
  if (x == left && !closed_left) return false;
  if (x == right && !closed_right) return false;
  return true;
}

bool Interval::overlaps(const Interval& o) const {
  return left < o.right && o.left < right;
}

bool operator==(const Interval& a, const Interval& b) {
  return a.left == b.left && a.right == b.right && a.closed_left == b.closed_left &&
         a.closed_right == b.closed_right;
}

std::string to_string(const Interval& i) {
  return std::string(i.closed_left ? "[" : "(") + to_string(i.left) + "," +
         to_string(i.right) + (i.closed_right ? "]" : ")");
}

Rational IndexMap::at(unsigned long n) const {
  Rational nn(n);
  return quad * nn * nn + lin * nn + cst;
}

std::string to_string(const IndexMap& m) {
  std::string s;
  auto term = [&](const Rational& coef, const std::string& var) {
    if (coef == 0) return;
    std::string piece;
    if (coef == 1 && !var.empty())
      piece = var;
    else if (coef == -1 && !var.empty())
      piece = "-" + var;
    else
      piece = to_string(coef) + var;
    if (!s.empty() && piece[0] != '-') s += "+";
    s += piece;
  };
  term(m.quad, "n^2");
  term(m.lin, "n");
  term(m.cst, "");
  if (s.empty()) s = "0";
  return s;
}

Interval TailDescriptor::interval_at(unsigned long n) const {
  Rational a = left.at(n);
  return Interval{a, a + width.lower_at(n), true, false};
}

Interval TailDescriptor::mirrored_interval_at(unsigned long n) const {
  Interval iv = interval_at(n);
  return Interval{-iv.right, -iv.left, false, true};
}

bool TailDescriptor::disjoint() const {
  if (width.c <= 0 || width.p < 0) return false;
  if (left.quad < 0) return false;
  if (left.quad == 0 && left.lin <= 0) return false;
  unsigned long n0 = from_index;
  // gap(n) = a(n+1)-a(n) = quad*(2n+1)+lin is nondecreasing; width is
  // nonincreasing, so checking the first index settles all of them.
  Rational gap = left.quad * Rational(2 * n0 + 1) + left.lin;
  if (gap < width.lower_at(n0)) return false;
  if (den(width.p) != 1 && gap < width.value_at(n0).hi) return false;
  if (mirrored && left.at(n0) < 0) return false;
  return true;
}

std::string to_string(const TailDescriptor& t) {
  std::string s = "tail(left=" + to_string(t.left) + ", width=" + to_string(t.width) +
                  ", from=" + std::to_string(t.from_index);
  if (t.mirrored) s += ", mirrored";
  return s + ")";
}

IntervalFamily IntervalFamily::of(std::vector<Interval> head) {
  IntervalFamily f;
  for (auto& iv : head)
    if (!iv.is_degenerate()) f.head_.push_back(iv);
  std::sort(f.head_.begin(), f.head_.end(),
            [](const Interval& a, const Interval& b) { return a.left < b.left; });
  f.validate();
  return f;
}

IntervalFamily IntervalFamily::with_tail(std::vector<Interval> head, TailDescriptor tail) {
  IntervalFamily f = of(std::move(head));
  f.tail_ = std::move(tail);
  f.validate();
  return f;
}

IntervalFamily IntervalFamily::full_line() {
  IntervalFamily f;
  f.neg_ray_ = Ray{Rational(0), false};
  f.pos_ray_ = Ray{Rational(0), true};
  return f;
}

void IntervalFamily::set_neg_ray(Ray r) {
  neg_ray_ = std::move(r);
  validate();
}

void IntervalFamily::set_pos_ray(Ray r) {
  pos_ray_ = std::move(r);
  validate();
}

bool IntervalFamily::is_empty() const {
  return head_.empty() && !tail_ && !neg_ray_ && !pos_ray_;
}

void IntervalFamily::validate() const {
  for (const auto& iv : head_)
    if (iv.right < iv.left)
      throw DomainError("IntervalFamily: interval endpoints reversed: " + to_string(iv));
  for (std::size_t i = 0; i + 1 < head_.size(); ++i)
    if (head_[i].overlaps(head_[i + 1]))
      throw DomainError("IntervalFamily: head intervals overlap: " +
                        to_string(head_[i]) + " vs " + to_string(head_[i + 1]));
  if (tail_) {
    if (!tail_->disjoint())
      throw DomainError("IntervalFamily: tail fails the disjointness check");
    if (den(tail_->width.p) != 1)
      throw DomainError(
          "IntervalFamily: tail width exponent must be an integer so block "
          "endpoints stay rational");
    // Head pieces must sit clear of the materializable tail region. a(n) is
    // increasing, so the scan can stop once a(n) clears the head piece.
    for (const auto& iv : head_) {
      Rational bound = std::max(abs_of(iv.left), abs_of(iv.right));
      for (unsigned long n = tail_->from_index; n < tail_->from_index + 4096; ++n) {
        Interval t = tail_->interval_at(n);
        if (t.left > bound) break;
        if (iv.overlaps(t)) throw DomainError("IntervalFamily: head overlaps tail");
        if (tail_->mirrored && iv.overlaps(tail_->mirrored_interval_at(n)))
          throw DomainError("IntervalFamily: head overlaps mirrored tail");
      }
    }
  }
  if (pos_ray_) {
    for (const auto& iv : head_)
      if (iv.right > pos_ray_->endpoint)
        throw DomainError("IntervalFamily: head reaches into the positive ray");
    if (tail_) throw DomainError("IntervalFamily: tail and positive ray both present");
  }
  if (neg_ray_) {
    for (const auto& iv : head_)
      if (iv.left < neg_ray_->endpoint)
        throw DomainError("IntervalFamily: head reaches into the negative ray");
    if (tail_ && tail_->mirrored)
      throw DomainError("IntervalFamily: mirrored tail and negative ray both present");
    if (tail_ && tail_->left.at(tail_->from_index) < neg_ray_->endpoint)
      throw DomainError("IntervalFamily: tail reaches into the negative ray");
  }
}

bool IntervalFamily::contains_point(const Rational& x) const {
  for (const auto& iv : head_)
    if (iv.contains(x)) return true;
  if (neg_ray_ && (x < neg_ray_->endpoint || (x == neg_ray_->endpoint && neg_ray_->closed)))
    return true;
  if (pos_ray_ && (x > pos_ray_->endpoint || (x == pos_ray_->endpoint && pos_ray_->closed)))
    return true;
  if (tail_) {
    // a(n) is increasing; only a few candidate indices can contain x.
    Rational ax = abs_of(x);
    for (unsigned long n = tail_->from_index;; ++n) {
      Interval iv = tail_->interval_at(n);
      if (iv.left > (tail_->mirrored ? ax : x)) break;
      if (iv.contains(x)) return true;
      if (tail_->mirrored && tail_->mirrored_interval_at(n).contains(x)) return true;
      if (n > tail_->from_index + 4096) break;  // defensive cap
    }
  }
  return false;
}

bool IntervalFamily::contains_interval(const Interval& iv) const {
  if (iv.is_degenerate()) return true;
  auto covered_by = [&](const Rational& l, const Rational& r) {
    return l <= iv.left && iv.right <= r;
  };
  for (const auto& h : head_)
    if (covered_by(h.left, h.right)) return true;
  if (neg_ray_ && iv.right <= neg_ray_->endpoint) return true;
  if (pos_ray_ && iv.left >= pos_ray_->endpoint) return true;
  if (tail_) {
    for (unsigned long n = tail_->from_index;; ++n) {
      Interval t = tail_->interval_at(n);
      if (t.left > std::max(abs_of(iv.left), abs_of(iv.right))) break;
      if (covered_by(t.left, t.right)) return true;
      if (tail_->mirrored) {
        Interval m = tail_->mirrored_interval_at(n);
        if (covered_by(m.left, m.right)) return true;
      }
      if (n > tail_->from_index + 4096) break;
    }
  }
  return false;
}

std::optional<Rational> IntervalFamily::sup_of_finite() const {
  if (tail_ || pos_ray_) return std::nullopt;
  if (head_.empty()) {
    if (neg_ray_) return neg_ray_->endpoint;
    return std::nullopt;
  }
  Rational s = head_.back().right;
  return s;
}

std::string IntervalFamily::to_text() const {
  std::string s = "{";
  bool first = true;
  auto append = [&](const std::string& piece) {
    if (!first) s += " ";
    s += piece;
    first = false;
  };
  if (neg_ray_)
    append("(-inf," + to_string(neg_ray_->endpoint) + (neg_ray_->closed ? "]" : ")"));
  for (const auto& iv : head_) append(to_string(iv));
  if (pos_ray_)
    append(std::string(pos_ray_->closed ? "[" : "(") + to_string(pos_ray_->endpoint) +
           ",inf)");
  s += "}";
  if (tail_) s += " ++ " + to_string(*tail_);
  return s;
}

bool operator==(const IntervalFamily& a, const IntervalFamily& b) {
  return a.to_text() == b.to_text();
}

ExtendedValue measure(const IntervalFamily& fam, unsigned series_terms) {
  if (fam.neg_ray() || fam.pos_ray()) {
    DivergenceCertificate cert;
    cert.term = SeqTerm{Rational(1), Rational(0)};
    cert.from_index = 1;
    for (unsigned long k = 1; k <= 5; ++k) cert.checked_prefix.emplace_back(k, Rational(k));
    cert.note = "unbounded ray: unit shells along the ray each have measure 1";
    return ExtendedValue::infinite(std::move(cert));
  }
  Rational head_measure = 0;
  for (const auto& iv : fam.head()) head_measure += iv.length();
  if (!fam.tail()) return ExtendedValue::finite(Enclosure::point(head_measure));

  const TailDescriptor& t = *fam.tail();
  SeqTerm widths = t.width;
  if (t.mirrored) widths.c *= 2;
  ExtendedValue tail_sum = series_tail(widths, t.from_index, series_terms);
  if (tail_sum.is_infinite()) return tail_sum;
  return ev_add(ExtendedValue::finite(Enclosure::point(head_measure)), tail_sum);
}

IntervalFamily truncate(const IntervalFamily& fam, unsigned long depth) {
  if (depth == 0) throw DomainError("truncate: depth must be >= 1");
  if (!fam.tail()) return fam;
  std::vector<Interval> head = fam.head();
  const TailDescriptor& t = *fam.tail();
  for (unsigned long n = t.from_index; n < t.from_index + depth; ++n) {
    head.push_back(t.interval_at(n));
    if (t.mirrored) {
      Interval m = t.mirrored_interval_at(n);
      if (!m.is_degenerate()) head.push_back(m);
    }
  }
  IntervalFamily out = IntervalFamily::of(std::move(head));
  if (fam.neg_ray()) out.set_neg_ray(*fam.neg_ray());
  if (fam.pos_ray()) out.set_pos_ray(*fam.pos_ray());
  return out;
}

IntervalFamily restrict_beyond(const IntervalFamily& fam, const Rational& cutoff) {
  if (cutoff < 0) throw DomainError("restrict_beyond: cutoff must be >= 0");
  std::vector<Interval> head;
  auto clip = [&](Interval iv) {
    if (iv.right <= cutoff && iv.left >= -cutoff) return;             // inside, dropped
    if (iv.left >= cutoff || iv.right <= -cutoff) {                   // already beyond
      head.push_back(iv);
      return;
    }
    if (iv.left < -cutoff) head.push_back({iv.left, std::min(iv.right, Rational(-cutoff)),
                                           iv.closed_left, false});
    if (iv.right > cutoff)
      head.push_back({std::max(iv.left, cutoff), iv.right, false, iv.closed_right});
  };
  for (const auto& iv : fam.head()) clip(iv);

  std::optional<TailDescriptor> tail;
  if (fam.tail()) {
    TailDescriptor t = *fam.tail();
    unsigned long n = t.from_index;
    // Walk forward until a(n) clears the cutoff; stragglers get clipped.
    while (t.left.at(n) <= cutoff) {
      clip(t.interval_at(n));
      if (t.mirrored) clip(t.mirrored_interval_at(n));
      ++n;
    }
    t.from_index = n;
    tail = t;
  }

  IntervalFamily out = tail ? IntervalFamily::with_tail(std::move(head), *tail)
                            : IntervalFamily::of(std::move(head));
  if (fam.neg_ray()) {
    Ray r = *fam.neg_ray();
    if (r.endpoint > -cutoff) r = Ray{Rational(-cutoff), false};
    out.set_neg_ray(r);
  }
  if (fam.pos_ray()) {
    Ray r = *fam.pos_ray();
    if (r.endpoint < cutoff) r = Ray{cutoff, false};
    out.set_pos_ray(r);
  }
  return out;
}

IntervalFamily intersect_window(const IntervalFamily& fam, const Rational& lo,
                                const Rational& hi) {
  if (lo > hi) throw DomainError("intersect_window: lo > hi");
  std::vector<Interval> head;
  auto clip = [&](const Interval& iv) {
    Rational l = std::max(iv.left, lo), r = std::min(iv.right, hi);
    if (l < r)
      head.push_back({l, r, l == iv.left ? iv.closed_left : true,
                      r == iv.right ? iv.closed_right : true});
  };
  for (const auto& iv : fam.head()) clip(iv);
  if (fam.tail()) {
    const TailDescriptor& t = *fam.tail();
    for (unsigned long n = t.from_index; t.left.at(n) <= hi; ++n) {
      clip(t.interval_at(n));
      if (t.mirrored) clip(t.mirrored_interval_at(n));
    }
  }
  if (fam.neg_ray()) {
    Rational r = std::min(fam.neg_ray()->endpoint, hi);
    if (lo < r) head.push_back({lo, r, true, true});
  }
  if (fam.pos_ray()) {
    Rational l = std::max(fam.pos_ray()->endpoint, lo);
    if (l < hi) head.push_back({l, hi, true, true});
  }
  return IntervalFamily::of(std::move(head));
}

IntervalFamily chop(const IntervalFamily& fam, const Rational& delta) {
  if (delta <= 0) throw DomainError("chop: delta must be positive");
  if (!fam.is_finite_union()) throw DomainError("chop: finite families only");
  Rational half = delta / 2;
  std::vector<Interval> out;
  for (const auto& iv : fam.head()) {
    Rational len = iv.length();
    if (len <= half) {
      out.push_back(iv);
      continue;
    }
    // ceil(len/delta) equal pieces land in (delta/2, delta].
    BigInt k = ceil_of(len / delta);
    Rational piece = len / Rational(k);
    Rational x = iv.left;
    for (BigInt j = 0; j < k; ++j) {
      Rational next = j == k - 1 ? iv.right : Rational(x + piece);
      out.push_back({x, next, j == 0 ? iv.closed_left : true,
                     j == k - 1 ? iv.closed_right : false});
      x = next;
    }
  }
  return IntervalFamily::of(std::move(out));
}

IntervalFamily family_union(const IntervalFamily& a, const IntervalFamily& b) {
  if (!a.is_finite_union() || !b.is_finite_union())
    throw DomainError("family_union: finite families only");
  std::vector<Interval> all = a.head();
  all.insert(all.end(), b.head().begin(), b.head().end());
  std::sort(all.begin(), all.end(),
            [](const Interval& x, const Interval& y) { return x.left < y.left; });
  std::vector<Interval> merged;
  for (const auto& iv : all) {
    if (iv.is_degenerate()) continue;
    Interval* back = merged.empty() ? nullptr : &merged.back();
    bool touches = back && (iv.left < back->right ||
                            (iv.left == back->right &&
                             (back->closed_right || iv.closed_left)));
    if (touches) {
      if (iv.left == back->left) back->closed_left = back->closed_left || iv.closed_left;
      if (iv.right > back->right) {
        back->right = iv.right;
        back->closed_right = iv.closed_right;
      } else if (iv.right == back->right) {
        back->closed_right = back->closed_right || iv.closed_right;
      }
    } else {
      merged.push_back(iv);
    }
  }
  return IntervalFamily::of(std::move(merged));
}

Result<IntervalFamily> carve_subfamily(const IntervalFamily& fam, const Rational& target,
                                       unsigned long tail_depth) {
  if (target <= 0) return Result<IntervalFamily>::fail("target measure must be positive");
  Rational remaining = target;
  std::vector<Interval> out;
  auto take = [&](const Interval& iv) {
    if (remaining <= 0) return;
    Rational len = iv.length();
    if (len <= remaining) {
      out.push_back(iv);
      remaining -= len;
    } else {
      out.push_back({iv.left, Rational(iv.left + remaining), iv.closed_left, true});
      remaining = 0;
    }
  };
  for (const auto& iv : fam.head()) take(iv);
  if (fam.tail() && remaining > 0) {
    const TailDescriptor& t = *fam.tail();
    for (unsigned long n = t.from_index; n < t.from_index + tail_depth && remaining > 0; ++n) {
      take(t.interval_at(n));
      if (t.mirrored) take(t.mirrored_interval_at(n));
    }
  }
  if (fam.pos_ray() && remaining > 0) {
    const Rational& e = fam.pos_ray()->endpoint;
    out.push_back({e, Rational(e + remaining), true, true});
    remaining = 0;
  }
  if (fam.neg_ray() && remaining > 0) {
    const Rational& e = fam.neg_ray()->endpoint;
    out.push_back({Rational(e - remaining), e, true, true});
    remaining = 0;
  }
  if (remaining > 0)
    return Result<IntervalFamily>::fail("family holds less than the requested measure");
  return Result<IntervalFamily>::ok(IntervalFamily::of(std::move(out)));
}

}  // namespace sets
}  // namespace funcspace
