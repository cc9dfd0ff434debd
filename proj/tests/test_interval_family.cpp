#include <vector>

#include "doctest.h"
#include "funcspace/errors.hpp"
#include "funcspace/interval_family.hpp"

using namespace funcspace;

namespace {

// The union of [2n, 2n + 1/n^2) for n >= 1, as a symbolic family.
IntervalFamily quadratic_gap_family() {
  TailDescriptor t;
  t.from_index = 1;
  t.left = IndexMap{rat(0), rat(2), rat(0)};
  t.width = SeqTerm{rat(1), rat(2)};
  return IntervalFamily::with_tail({}, t);
}

}  // namespace

TEST_CASE("interval basics") {
  Interval i{rat(0), rat(1), true, false};
  CHECK(i.length() == 1);
  CHECK(i.contains(rat(0)));
  CHECK(!i.contains(rat(1)));
  CHECK(i.contains(rat(1, 2)));
  Interval j{rat(1), rat(2)};
  CHECK(!i.overlaps(j));  // touching endpoints, disjoint interiors
  Interval k{rat(1, 2), rat(3, 2)};
  CHECK(i.overlaps(k));
  CHECK(to_string(i) == "[0,1)");
}

TEST_CASE("family construction sorts and validates") {
  IntervalFamily f = IntervalFamily::of({{rat(4), rat(5)}, {rat(0), rat(1)}, {rat(2), rat(2)}});
  REQUIRE(f.head().size() == 2);  // degenerate piece dropped
  CHECK(f.head()[0].left == 0);
  CHECK(f.head()[1].left == 4);
  CHECK_THROWS_AS(IntervalFamily::of({{rat(0), rat(2)}, {rat(1), rat(3)}}), DomainError);
  CHECK(IntervalFamily::empty().is_empty());
  CHECK(IntervalFamily::full_line().has_unbounded_part());
}

TEST_CASE("tail disjointness check") {
  TailDescriptor ok;
  ok.left = IndexMap{rat(0), rat(2), rat(0)};
  ok.width = SeqTerm{rat(1), rat(2)};
  CHECK(ok.disjoint());  // gap 2, widths <= 1

  TailDescriptor bad;
  bad.left = IndexMap{rat(0), rat(1), rat(0)};  // a(n) = n, gap 1
  bad.width = SeqTerm{rat(2), rat(0)};          // constant width 2
  CHECK(!bad.disjoint());
  CHECK_THROWS_AS(IntervalFamily::with_tail({}, bad), DomainError);
}

TEST_CASE("membership queries reach into the tail") {
  IntervalFamily a = quadratic_gap_family();
  CHECK(a.contains_point(rat(2)));           // n = 1 block [2,3)
  CHECK(a.contains_point(rat(4)));           // n = 2 block [4, 4+1/4)
  CHECK(a.contains_point(rat(33, 8)));       // 4.125 < 4.25
  CHECK(!a.contains_point(rat(9, 2)));       // 4.5 outside
  CHECK(!a.contains_point(rat(5)));
  CHECK(a.contains_point(rat(20)));          // n = 10 block
  CHECK(!a.contains_point(rat(-2)));
  CHECK(a.contains_interval({rat(6), rat(55, 9)}));  // inside [6, 6+1/9)
  CHECK(!a.contains_interval({rat(6), rat(7)}));
}

TEST_CASE("measure adds exact head and certified tail") {
  IntervalFamily f = IntervalFamily::of({{rat(0), rat(1)}, {rat(3, 2), rat(2)}});
  ExtendedValue m = measure(f);
  REQUIRE(m.is_finite());
  CHECK(m.enclosure().exact);
  CHECK(m.enclosure().lo == rat(3, 2));

  ExtendedValue ma = measure(quadratic_gap_family(), 100);
  REQUIRE(ma.is_finite());
  // Basel sum: the bracket must contain 1.6449340668... and be tight.
  CHECK(ma.enclosure().lo <= rat(16449340669, 10000000000));
  CHECK(ma.enclosure().hi >= rat(16449340668, 10000000000));
  CHECK(ma.enclosure().width() <= rat(2, 100));

  IntervalFamily ray;
  ray.set_pos_ray(Ray{rat(5)});
  CHECK(measure(ray).is_infinite());

  TailDescriptor harmonic;
  harmonic.left = IndexMap{rat(0), rat(2), rat(0)};
  harmonic.width = SeqTerm{rat(1), rat(1)};
  CHECK(measure(IntervalFamily::with_tail({}, harmonic)).is_infinite());
}

TEST_CASE("mirrored tails double the measure") {
  TailDescriptor t;
  t.left = IndexMap{rat(0), rat(2), rat(0)};
  t.width = SeqTerm{rat(1), rat(2)};
  t.mirrored = true;
  IntervalFamily f = IntervalFamily::with_tail({}, t);
  CHECK(f.contains_point(rat(-2)));         // mirror of [2,3) is (-3,-2]
  CHECK(f.contains_point(rat(-5, 2)));
  CHECK(!f.contains_point(rat(-3)));
  ExtendedValue m = measure(f, 200);
  REQUIRE(m.is_finite());
  CHECK(m.enclosure().lo >= rat(32, 10));   // 2 * basel = 3.2898...
  CHECK(m.enclosure().hi <= rat(34, 10));
}

TEST_CASE("truncate materializes tail blocks in order") {
  IntervalFamily a = quadratic_gap_family();
  IntervalFamily t3 = truncate(a, 3);
  REQUIRE(t3.head().size() == 3);
  CHECK(t3.head()[0] == Interval{rat(2), rat(3)});
  CHECK(t3.head()[1] == Interval{rat(4), rat(17, 4)});
  CHECK(t3.head()[2] == Interval{rat(6), rat(55, 9)});
  CHECK(!t3.tail().has_value());
  ExtendedValue m = measure(t3);
  CHECK(m.enclosure().exact);
  CHECK(m.enclosure().lo == rat(49, 36));  // 1 + 1/4 + 1/9
  CHECK_THROWS_AS(truncate(a, 0), DomainError);
}

TEST_CASE("restrict_beyond drops the inner window and renumbers the tail") {
  IntervalFamily a = quadratic_gap_family();
  IntervalFamily r = restrict_beyond(a, rat(7));
  // Blocks n = 1..3 live inside [0,7); they disappear entirely.
  CHECK(r.head().empty());
  REQUIRE(r.tail().has_value());
  CHECK(r.tail()->from_index == 4);
  CHECK(!r.contains_point(rat(2)));
  CHECK(r.contains_point(rat(8)));

  // A cutoff inside a block clips it.
  IntervalFamily r2 = restrict_beyond(a, rat(5, 2));
  REQUIRE(r2.head().size() == 1);
  CHECK(r2.head()[0] == Interval{rat(5, 2), rat(3), false, false});
  CHECK(r2.tail()->from_index == 2);
}

TEST_CASE("intersect_window clips head, tail, and rays") {
  IntervalFamily a = quadratic_gap_family();
  IntervalFamily w = intersect_window(a, rat(0), rat(5));
  REQUIRE(w.head().size() == 2);
  CHECK(w.head()[0] == Interval{rat(2), rat(3)});
  CHECK(w.head()[1] == Interval{rat(4), rat(17, 4)});
  CHECK(w.is_finite_union());

  IntervalFamily line = IntervalFamily::full_line();
  IntervalFamily seg = intersect_window(line, rat(-1), rat(1));
  ExtendedValue m = measure(seg);
  CHECK(m.enclosure().lo == 2);
}

TEST_CASE("chop splits long pieces into near-delta pieces") {
  IntervalFamily f = IntervalFamily::of({{rat(0), rat(1)}, {rat(5), rat(21, 4)}});
  IntervalFamily c = chop(f, rat(1, 4));
  // [0,1) -> 4 pieces of 1/4; [5, 5.25) is length 1/4 > 1/8, one piece.
  REQUIRE(c.head().size() == 5);
  Rational total = 0;
  for (const auto& iv : c.head()) {
    CHECK(iv.length() <= rat(1, 4));
    CHECK(iv.length() > rat(1, 8));
    total += iv.length();
  }
  CHECK(total == rat(5, 4));

  // Pieces at or below delta/2 pass through unchanged.
  IntervalFamily tiny = IntervalFamily::of({{rat(0), rat(1, 10)}});
  CHECK(chop(tiny, rat(1, 4)).head()[0].length() == rat(1, 10));
  CHECK_THROWS_AS(chop(f, rat(0)), DomainError);
  CHECK_THROWS_AS(chop(quadratic_gap_family(), rat(1)), DomainError);
}

TEST_CASE("family_union coalesces overlaps") {
  IntervalFamily a = IntervalFamily::of({{rat(0), rat(2)}, {rat(5), rat(6)}});
  IntervalFamily b = IntervalFamily::of({{rat(1), rat(3)}, {rat(6), rat(7)}});
  IntervalFamily u = family_union(a, b);
  REQUIRE(u.head().size() == 2);
  CHECK(u.head()[0] == Interval{rat(0), rat(3)});
  CHECK(u.head()[1] == Interval{rat(5), rat(7)});

  // Open endpoints that merely touch stay separate.
  IntervalFamily c = IntervalFamily::of({{rat(0), rat(1), true, false}});
  IntervalFamily d = IntervalFamily::of({{rat(1), rat(2), false, false}});
  CHECK(family_union(c, d).head().size() == 2);
}

TEST_CASE("carve_subfamily extracts an exact-measure subset") {
  IntervalFamily a = quadratic_gap_family();
  auto sub = carve_subfamily(a, rat(1, 2));
  REQUIRE(sub.has_value());
  ExtendedValue m = measure(*sub);
  CHECK(m.enclosure().exact);
  CHECK(m.enclosure().lo == rat(1, 2));
  // Every carved piece lies inside the source family.
  for (const auto& iv : sub->head()) CHECK(a.contains_interval(iv));

  auto big = carve_subfamily(a, rat(11, 8));
  REQUIRE(big.has_value());
  CHECK(measure(*big).enclosure().lo == rat(11, 8));

  IntervalFamily small = IntervalFamily::of({{rat(0), rat(1)}});
  auto too_much = carve_subfamily(small, rat(2));
  CHECK(!too_much.has_value());
  CHECK(!carve_subfamily(small, rat(0)).has_value());
}

TEST_CASE("to_text is stable and drives equality") {
  IntervalFamily a = quadratic_gap_family();
  CHECK(a == quadratic_gap_family());
  CHECK(!(a == IntervalFamily::empty()));
  CHECK(a.to_text().find("tail") != std::string::npos);
}
