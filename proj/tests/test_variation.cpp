#include <doctest.h>

#include "funcspace/variation.hpp"

using namespace funcspace;

namespace {

FuncPtr harmonic_steps() {
  return make_step_series(SeqTerm{Rational(1), Rational(1)},
                          TailDescriptor{1, IndexMap{Rational(0), Rational(2), Rational(0)},
                                         SeqTerm{Rational(1), Rational(2)}, false});
}

}  // namespace

TEST_CASE("variation of monotone and kinked pieces is exact") {
  auto v = total_variation(*make_affine(Rational(3), Rational(0)), Rational(0), Rational(4));
  REQUIRE(v.is_finite());
  CHECK(v.enclosure().exact);
  CHECK(v.enclosure().lo == Rational(12));

  CHECK(total_variation(*make_affine(Rational(0), Rational(5)), Rational(-1), Rational(1))
            .enclosure()
            .lo == Rational(0));

  // |x|^2 on [-1, 2]: down 1, up 4.
  auto w = total_variation(*make_power_abs(Rational(2)), Rational(-1), Rational(2));
  REQUIRE(w.is_finite());
  CHECK(w.enclosure().exact);
  CHECK(w.enclosure().lo == Rational(5));

  // sign(x) jumps by 2 across 0 and is flat elsewhere.
  auto s = total_variation(*make_power_ext(Rational(0), true), Rational(-1), Rational(1));
  REQUIRE(s.is_finite());
  CHECK(s.enclosure().lo == Rational(2));
  CHECK(total_variation(*make_power_ext(Rational(0), true), Rational(1, 2), Rational(1))
            .enclosure()
            .lo == Rational(0));

  // Scaling multiplies variation by |r|.
  auto sc = total_variation(*make_scale(Rational(-2), make_affine(Rational(3), Rational(0))),
                            Rational(0), Rational(1));
  CHECK(sc.enclosure().lo == Rational(6));

  CHECK_THROWS_AS(total_variation(*make_affine(Rational(1), Rational(0)), Rational(1),
                                  Rational(1)),
                  DomainError);
}

TEST_CASE("periodic sqrt variation counts full half-windows") {
  // On [0, 2]: up from 0 to 1, back down to 0 -> variation 2 exactly.
  auto v = total_variation(*make_sqrt_periodic(), Rational(0), Rational(2));
  REQUIRE(v.is_finite());
  CHECK(v.enclosure().exact);
  CHECK(v.enclosure().lo == Rational(2));

  // On [0, 1/4] only the rising piece: sqrt(1/4) = 1/2.
  auto w = total_variation(*make_sqrt_periodic(), Rational(0), Rational(1, 4));
  CHECK(w.enclosure().lo == Rational(1, 2));
}

TEST_CASE("reciprocal-like poles give divergence certificates") {
  auto v = total_variation(*make_reciprocal(), Rational(-1), Rational(1));
  REQUIRE(v.is_infinite());
  CHECK(v.certificate().note.find("pole") != std::string::npos);
  // Away from the pole: |1/b - 1/a| exactly.
  auto w = total_variation(*make_reciprocal(), Rational(1, 2), Rational(2));
  REQUIRE(w.is_finite());
  CHECK(w.enclosure().lo == Rational(3, 2));

  auto p = total_variation(*make_power_ext(Rational(-2), false), Rational(-1), Rational(2));
  CHECK(p.is_infinite());

  // The periodic derivative has a pole at every even integer.
  auto d = total_variation(*make_sqrt_periodic_deriv(), Rational(3, 2), Rational(5, 2));
  REQUIRE(d.is_infinite());
  CHECK(d.certificate().note.find("2") != std::string::npos);
}

TEST_CASE("periodic derivative variation away from even integers") {
  // On [1/4, 3/4] (right half of the window at 0): f(t) = 1/(2 sqrt(t))
  // decreases from f(1/4) = 1 to f(3/4) = 1/sqrt(3) ~ 0.5774, so the
  // variation is 1 - 1/sqrt(3) ~ 0.4226.
  auto v = total_variation(*make_sqrt_periodic_deriv(), Rational(1, 4), Rational(3, 4));
  REQUIRE(v.is_finite());
  const auto& e = v.enclosure();
  CHECK(e.lo <= Rational(1) - Rational(577, 1000));
  CHECK(e.hi >= Rational(1) - Rational(578, 1000));
  CHECK(e.width() <= Rational(1, 1000000));

  // Across one corner (odd integer): jump of exactly 1 plus monotone slides.
  auto across = total_variation(*make_sqrt_periodic_deriv(), Rational(3, 4), Rational(5, 4));
  REQUIRE(across.is_finite());
  // Pieces: [3/4, 1] slides from 1/sqrt(3) down to the left limit 1/2;
  // jump 1 at the corner; [1, 5/4] slides from -1/2 down to -1/sqrt(3)
  // (measured from the center at 2). Total 2/sqrt(3) ~ 1.1547.
  CHECK(across.enclosure().lo > Rational(1154, 1000));
  CHECK(across.enclosure().hi < Rational(1156, 1000));
}

TEST_CASE("step series variation sums jump magnitudes") {
  auto f = harmonic_steps();
  // Blocks [2,3) h=1, [4,17/4) h=1/2, [6,55/9) h=1/3 inside [0, 7]:
  // each contributes twice its height: 2(1 + 1/2 + 1/3) = 11/3.
  auto v = total_variation(*f, Rational(0), Rational(7));
  REQUIRE(v.is_finite());
  CHECK(v.enclosure().exact);
  CHECK(v.enclosure().lo == Rational(11, 3));

  // Window cutting a block in half sees one edge only.
  auto w = total_variation(*f, Rational(0), Rational(5, 2));
  CHECK(w.enclosure().lo == Rational(1));

  // Mirrored version doubles the count symmetrically.
  auto m = make_step_series(SeqTerm{Rational(1), Rational(1)},
                            TailDescriptor{1, IndexMap{Rational(0), Rational(2), Rational(0)},
                                           SeqTerm{Rational(1), Rational(2)}, true});
  auto mv = total_variation(*m, Rational(-7), Rational(7));
  CHECK(mv.enclosure().lo == Rational(22, 3));
}

TEST_CASE("sum variation aligns signs when it can") {
  // Two increasing functions: exact sum of deltas.
  auto f = make_sum(make_affine(Rational(2), Rational(0)), make_power_abs(Rational(1)));
  auto v = total_variation(*f, Rational(0), Rational(3));
  REQUIRE(v.is_finite());
  CHECK(v.enclosure().exact);
  CHECK(v.enclosure().lo == Rational(9));

  // Opposing monotone directions: bracket, lower bound from |delta sum|.
  auto g = make_sum(make_affine(Rational(1), Rational(0)),
                    make_scale(Rational(-1), make_power_abs(Rational(2))));
  // On [0, 2]: x - x^2 rises to 1/4 at 1/2 then falls to -2: TV = 1/4 + 9/4 = 5/2.
  auto w = total_variation(*g, Rational(0), Rational(2));
  REQUIRE(w.is_finite());
  CHECK(w.enclosure().lo <= Rational(5, 2));
  CHECK(w.enclosure().hi >= Rational(5, 2));
  // Upper bound stays below the triangle total (2 + 4 = 6).
  CHECK(w.enclosure().hi <= Rational(6));

  // Infinite + finite stays infinite with an amended note.
  auto h = make_sum(make_reciprocal(), make_affine(Rational(1), Rational(0)));
  auto hv = total_variation(*h, Rational(-1), Rational(1));
  REQUIRE(hv.is_infinite());

  // Infinite + infinite refuses to decide.
  auto c = make_sum(make_reciprocal(), make_scale(Rational(-1), make_reciprocal()));
  CHECK(total_variation(*c, Rational(-1), Rational(1)).is_unknown());
}
