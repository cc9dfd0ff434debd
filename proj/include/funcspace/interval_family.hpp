#pragma once

#include <optional>
#include <string>
#include <vector>

#include "funcspace/errors.hpp"
#include "funcspace/series.hpp"

namespace funcspace {
inline namespace sets {

using numerics::to_string;  // keep the Rational overloads visible next to ours

/// A bounded interval with endpoint closedness flags. Endpoints are null
/// sets, so the flags never affect a measure; they are tracked for faithful
/// printing and membership tests.
struct Interval {
  Rational left;
  Rational right;
  bool closed_left = true;
  bool closed_right = false;

  Rational length() const { return right - left; }
  bool is_degenerate() const { return left == right; }
  bool contains(const Rational& x) const;
  /// Interior-disjointness (shared endpoints allowed).
  bool overlaps(const Interval& o) const;
};

bool operator==(const Interval& a, const Interval& b);
std::string to_string(const Interval& i);

/// Affine-or-quadratic index map n |-> quad*n^2 + lin*n + cst with quad >= 0
/// and (quad > 0 or lin > 0), so the map is strictly increasing.
struct IndexMap {
  Rational quad;
  Rational lin;
  Rational cst;

  Rational at(unsigned long n) const;
};

std::string to_string(const IndexMap& m);

/// Symbolic countable part of a family: intervals [a(n), a(n)+w(n)) for
/// n >= from_index, with w(n) = c/n^p, p >= 0. With `mirrored` the family
/// also contains the reflected copies (-a(n)-w(n), -a(n)].
struct TailDescriptor {
  unsigned long from_index = 1;
  IndexMap left;
  SeqTerm width;
  bool mirrored = false;

  Interval interval_at(unsigned long n) const;
  Interval mirrored_interval_at(unsigned long n) const;
  /// Checks a(n+1) >= a(n) + w(n) symbolically: the gap is nondecreasing and
  /// the width nonincreasing, so the check at n = from_index suffices.
  bool disjoint() const;
};

std::string to_string(const TailDescriptor& t);

/// Unbounded piece (-inf, endpoint] or [endpoint, +inf).
struct Ray {
  Rational endpoint;
  bool closed = true;
};

/// Finite disjoint interval union, plus an optional symbolic tail and
/// optional rays. The model for every measurable set the proofs touch.
class IntervalFamily {
 public:
  IntervalFamily() = default;

  static IntervalFamily empty() { return IntervalFamily(); }
  /// Sorts, drops degenerate intervals, and validates pairwise disjointness.
  static IntervalFamily of(std::vector<Interval> head);
  static IntervalFamily with_tail(std::vector<Interval> head, TailDescriptor tail);
  static IntervalFamily full_line();

  const std::vector<Interval>& head() const { return head_; }
  const std::optional<TailDescriptor>& tail() const { return tail_; }
  const std::optional<Ray>& neg_ray() const { return neg_ray_; }
  const std::optional<Ray>& pos_ray() const { return pos_ray_; }

  void set_neg_ray(Ray r);
  void set_pos_ray(Ray r);

  bool is_empty() const;
  bool has_unbounded_part() const { return neg_ray_ || pos_ray_; }
  bool is_finite_union() const { return !tail_ && !has_unbounded_part(); }

  bool contains_point(const Rational& x) const;
  /// Whole-interval containment (up to endpoints) in some component.
  bool contains_interval(const Interval& iv) const;

  /// Least upper bound of the bounded components (head + materialized view
  /// of the tail is unbounded, so only valid when tail-free and rayless).
  std::optional<Rational> sup_of_finite() const;

  std::string to_text() const;

 private:
  std::vector<Interval> head_;
  std::optional<TailDescriptor> tail_;
  std::optional<Ray> neg_ray_;
  std::optional<Ray> pos_ray_;

  void validate() const;
};

bool operator==(const IntervalFamily& a, const IntervalFamily& b);

/// Exact head measure plus certified tail series; proven infinite when a ray
/// is present or the tail widths form a divergent series.
ExtendedValue measure(const IntervalFamily& fam, unsigned series_terms = 100);

/// Materializes tail indices from_index .. from_index+depth-1 into the head
/// and drops the tail. Rays are preserved unchanged.
IntervalFamily truncate(const IntervalFamily& fam, unsigned long depth);

/// Removes everything inside [-cutoff, cutoff], clipping stragglers.
IntervalFamily restrict_beyond(const IntervalFamily& fam, const Rational& cutoff);

/// Keeps only the part inside [lo, hi] (finite families and tails).
IntervalFamily intersect_window(const IntervalFamily& fam, const Rational& lo,
                                const Rational& hi);

/// Splits every piece longer than delta/2 into equal pieces with lengths in
/// (delta/2, delta]; shorter pieces pass through. Finite families only.
IntervalFamily chop(const IntervalFamily& fam, const Rational& delta);

/// Union of finite families (overlapping parts coalesced).
IntervalFamily family_union(const IntervalFamily& a, const IntervalFamily& b);

/// Carves a finite subfamily of fam with measure exactly `target`, walking
/// head, tail, and rays in a fixed order and clipping the last piece. Fails
/// when fam provably holds less than target within the materialized depth.
Result<IntervalFamily> carve_subfamily(const IntervalFamily& fam, const Rational& target,
                                       unsigned long tail_depth = 100000);

}  // namespace sets
}  // namespace funcspace
