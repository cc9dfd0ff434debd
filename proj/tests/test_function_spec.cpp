#include <doctest.h>

#include "funcspace/function_spec.hpp"

using namespace funcspace;

namespace {

TailDescriptor quadratic_gap_placement() {
  // Blocks [2n, 2n + 1/n^2) starting at n = 1.
  return TailDescriptor{1, IndexMap{Rational(0), Rational(2), Rational(0)},
                        SeqTerm{Rational(1), Rational(2)}, false};
}

FuncPtr harmonic_steps() {
  // Height 1/n on block n.
  return make_step_series(SeqTerm{Rational(1), Rational(1)}, quadratic_gap_placement());
}

}  // namespace

TEST_CASE("factories validate their arguments") {
  CHECK_THROWS_AS(make_power_abs(Rational(0)), DomainError);
  CHECK_THROWS_AS(make_power_abs(Rational(-1)), DomainError);
  CHECK_THROWS_AS(make_scale(Rational(0), make_affine(Rational(1), Rational(0))), DomainError);
  // Coefficient exponent must be an integer.
  CHECK_THROWS_AS(make_step_series(SeqTerm{Rational(1), Rational(1, 2)},
                                   quadratic_gap_placement()),
                  DomainError);
  // Width exponent must be an integer too: block endpoints stay rational.
  CHECK_THROWS_AS(make_step_series(SeqTerm{Rational(1), Rational(1)},
                                   TailDescriptor{1, IndexMap{Rational(0), Rational(2), Rational(0)},
                                                  SeqTerm{Rational(1), Rational(5, 2)}, false}),
                  DomainError);
  CHECK_THROWS_AS(make_step_series(SeqTerm{Rational(0), Rational(1)},
                                   quadratic_gap_placement()),
                  DomainError);
  // Overlapping placement: widths exceed the gaps.
  CHECK_THROWS_AS(make_step_series(SeqTerm{Rational(1), Rational(1)},
                                   TailDescriptor{1, IndexMap{Rational(0), Rational(1), Rational(0)},
                                                  SeqTerm{Rational(2), Rational(0)}, false}),
                  DomainError);
}

TEST_CASE("canonical text round-trips the construction") {
  CHECK(to_text(make_affine(Rational(1), Rational(0))) == "affine(1, 0)");
  CHECK(to_text(make_affine(Rational(-3, 2), Rational(5))) == "affine(-3/2, 5)");
  CHECK(to_text(make_power_abs(Rational(1, 2))) == "pow_abs(1/2)");
  CHECK(to_text(make_power_ext(Rational(0), true)) == "pow_ext(0, signed)");
  CHECK(to_text(make_power_ext(Rational(-2), false)) == "pow_ext(-2, abs)");
  CHECK(to_text(make_reciprocal()) == "reciprocal");
  CHECK(to_text(make_sqrt_periodic()) == "sqrt_periodic");
  CHECK(to_text(make_sqrt_periodic_deriv()) == "deriv(sqrt_periodic)");
  CHECK(to_text(harmonic_steps()) ==
        "step_series(coef=1/n, left=2n, width=1/n^2, from=1)");
  auto mirrored = make_step_series(
      SeqTerm{Rational(2), Rational(0)},
      TailDescriptor{3, IndexMap{Rational(1), Rational(0), Rational(1)},
                     SeqTerm{Rational(1, 4), Rational(3)}, true});
  CHECK(to_text(mirrored) ==
        "step_series(coef=2, left=n^2+1, width=1/4/n^3, from=3, mirrored)");
  CHECK(to_text(make_scale(Rational(1, 2),
                           make_sum(make_affine(Rational(1), Rational(0)), make_reciprocal()))) ==
        "scale(1/2, sum(affine(1, 0), reciprocal))");
  CHECK(equal_specs(make_power_abs(Rational(2)), make_power_abs(Rational(2))));
  CHECK_FALSE(equal_specs(make_power_abs(Rational(2)), make_power_abs(Rational(3))));
}

TEST_CASE("evaluation is exact at rational values") {
  auto aff = make_affine(Rational(3), Rational(-2));
  auto v = evaluate(aff, Rational(5));
  REQUIRE(v);
  CHECK(v->exact);
  CHECK(v->lo == Rational(13));

  // Perfect squares come out exactly.
  auto root = evaluate(make_power_abs(Rational(1, 2)), Rational(9, 4));
  REQUIRE(root);
  CHECK(root->exact);
  CHECK(root->lo == Rational(3, 2));

  // Irrational values come back as genuine brackets.
  auto irr = evaluate(make_power_abs(Rational(1, 2)), Rational(2));
  REQUIRE(irr);
  CHECK_FALSE(irr->exact);
  CHECK(irr->lo * irr->lo <= Rational(2));
  CHECK(irr->hi * irr->hi >= Rational(2));
  CHECK(irr->width() <= Rational(1, 100000000));

  // Negative arguments: |x|^e is even, the signed form is odd.
  auto even_v = evaluate(make_power_abs(Rational(2)), Rational(-3));
  REQUIRE(even_v);
  CHECK(even_v->lo == Rational(9));
  auto odd_v = evaluate(make_power_ext(Rational(2), true), Rational(-3));
  REQUIRE(odd_v);
  CHECK(odd_v->lo == Rational(-9));

  auto sgn = evaluate(make_power_ext(Rational(0), true), Rational(-7, 3));
  REQUIRE(sgn);
  CHECK(sgn->lo == Rational(-1));
  CHECK_FALSE(evaluate(make_power_ext(Rational(0), true), Rational(0)));

  auto rec = evaluate(make_reciprocal(), Rational(-4));
  REQUIRE(rec);
  CHECK(rec->lo == Rational(-1, 4));
  CHECK_FALSE(evaluate(make_reciprocal(), Rational(0)));
}

TEST_CASE("periodic sqrt evaluates window by window") {
  auto f = make_sqrt_periodic();
  // 9/4 lies in the window around 2: sqrt(1/4) = 1/2 exactly.
  auto v = evaluate(f, Rational(9, 4));
  REQUIRE(v);
  CHECK(v->exact);
  CHECK(v->lo == Rational(1, 2));
  // At an even integer the function vanishes; at an odd one it equals 1.
  CHECK(evaluate(f, Rational(2))->lo == Rational(0));
  CHECK(evaluate(f, Rational(-3))->lo == Rational(1));
  // Negative window: -3/4 is measured from 0.
  auto w = evaluate(f, Rational(-3, 4));
  REQUIRE(w);
  CHECK(w->lo * w->lo <= Rational(3, 4));
  CHECK(w->hi * w->hi >= Rational(3, 4));

  auto d = make_sqrt_periodic_deriv();
  auto dv = evaluate(d, Rational(9, 4));
  REQUIRE(dv);
  CHECK(dv->lo == Rational(1));  // 1 / (2 sqrt(1/4)), positive side
  auto dn = evaluate(d, Rational(7, 4));
  REQUIRE(dn);
  CHECK(dn->lo == Rational(-1));  // left of the center at 2
  CHECK_FALSE(evaluate(d, Rational(2)));  // pole
  CHECK_FALSE(evaluate(d, Rational(3)));  // corner
  CHECK_FALSE(evaluate(d, Rational(0)));
}

TEST_CASE("step series evaluation walks its blocks") {
  auto f = harmonic_steps();
  CHECK(evaluate(f, Rational(2))->lo == Rational(1));
  CHECK(evaluate(f, Rational(9, 4))->lo == Rational(1));
  CHECK(evaluate(f, Rational(3))->lo == Rational(0));  // right edge open
  CHECK(evaluate(f, Rational(4))->lo == Rational(1, 2));
  CHECK(evaluate(f, Rational(17, 4))->lo == Rational(0));
  CHECK(evaluate(f, Rational(-2))->lo == Rational(0));  // not mirrored

  auto m = make_step_series(SeqTerm{Rational(3), Rational(0)},
                            TailDescriptor{1, IndexMap{Rational(0), Rational(2), Rational(0)},
                                           SeqTerm{Rational(1), Rational(2)}, true});
  CHECK(evaluate(m, Rational(-2))->lo == Rational(3));       // mirrored right edge closed
  CHECK(evaluate(m, Rational(-9, 4))->lo == Rational(3));    // inside (-3, -2]
  CHECK(evaluate(m, Rational(-3))->lo == Rational(0));       // mirrored left edge open
}

TEST_CASE("sums and scales compose evaluation") {
  auto f = make_scale(Rational(1, 2),
                      make_sum(make_affine(Rational(1), Rational(0)), make_sqrt_periodic()));
  // At 9/4: (9/4 + 1/2) / 2 = 11/8.
  auto v = evaluate(f, Rational(9, 4));
  REQUIRE(v);
  CHECK(v->exact);
  CHECK(v->lo == Rational(11, 8));
  // A failing summand fails the sum.
  CHECK_FALSE(evaluate(make_sum(make_affine(Rational(1), Rational(0)), make_reciprocal()),
                       Rational(0)));
}

TEST_CASE("derivatives map within the catalog") {
  // d(3x - 2) = 3.
  auto da = derivative(make_affine(Rational(3), Rational(-2)));
  REQUIRE(da);
  CHECK(to_text(*da) == "affine(0, 3)");

  // d|x| = sign(x).
  auto dabs = derivative(make_power_abs(Rational(1)));
  REQUIRE(dabs);
  CHECK(to_text(*dabs) == "pow_ext(0, signed)");

  // d|x|^2 = 2x: check through evaluation.
  auto dsq = derivative(make_power_abs(Rational(2)));
  REQUIRE(dsq);
  CHECK(evaluate(*dsq, Rational(-3))->lo == Rational(-6));

  // d(1/x) = -1/x^2.
  auto drec = derivative(make_reciprocal());
  REQUIRE(drec);
  CHECK(evaluate(*drec, Rational(2))->lo == Rational(-1, 4));
  CHECK(evaluate(*drec, Rational(-2))->lo == Rational(-1, 4));

  auto dsp = derivative(make_sqrt_periodic());
  REQUIRE(dsp);
  CHECK(to_text(*dsp) == "deriv(sqrt_periodic)");
  CHECK_FALSE(derivative(make_sqrt_periodic_deriv()));

  // Step series: a.e. derivative is the zero function, but the attribute
  // record keeps the function outside the locally-AC class.
  auto dstep = derivative(harmonic_steps());
  REQUIRE(dstep);
  CHECK(to_text(*dstep) == "affine(0, 0)");
  CHECK_FALSE(attributes(harmonic_steps()).ac_loc);

  // Chain through scale and sum: d(x/2 + |x|) at -1 is 1/2 - 1 = -1/2.
  auto dcomp = derivative(make_sum(make_scale(Rational(1, 2), make_affine(Rational(1), Rational(0))),
                                   make_power_abs(Rational(1))));
  REQUIRE(dcomp);
  CHECK(evaluate(*dcomp, Rational(-1))->lo == Rational(-1, 2));
}

TEST_CASE("attribute records compose through scale and sum") {
  CHECK(attributes(make_affine(Rational(1), Rational(2))).ac_loc);
  CHECK(attributes(make_sqrt_periodic()).ac_loc);
  CHECK(attributes(make_sqrt_periodic()).continuity);
  CHECK(attributes(make_power_abs(Rational(1, 2))).ac_loc);
  CHECK_FALSE(attributes(make_reciprocal()).ac_loc);
  CHECK_FALSE(attributes(make_sqrt_periodic_deriv()).ac_loc);
  CHECK_FALSE(attributes(harmonic_steps()).ac_loc);
  CHECK_FALSE(attributes(harmonic_steps()).continuity);
  // Sum inherits the weakest member.
  auto mix = make_sum(make_affine(Rational(1), Rational(0)), harmonic_steps());
  CHECK_FALSE(attributes(mix).ac_loc);
  auto nice = make_scale(Rational(-2), make_sum(make_affine(Rational(1), Rational(0)),
                                                make_sqrt_periodic()));
  CHECK(attributes(nice).ac_loc);
}

TEST_CASE("interval continuity is sharper than the global attribute") {
  CHECK(continuous_on(*make_reciprocal(), Rational(1), Rational(2)));
  CHECK_FALSE(continuous_on(*make_reciprocal(), Rational(-1), Rational(1)));
  CHECK(continuous_on(*make_sqrt_periodic_deriv(), Rational(1, 4), Rational(3, 4)));
  CHECK_FALSE(continuous_on(*make_sqrt_periodic_deriv(), Rational(1, 2), Rational(3, 2)));
  // Step series: continuous strictly inside a block or in a gap.
  CHECK(continuous_on(*harmonic_steps(), Rational(9, 4), Rational(11, 4)));
  CHECK(continuous_on(*harmonic_steps(), Rational(13, 4), Rational(15, 4)));
  CHECK_FALSE(continuous_on(*harmonic_steps(), Rational(3, 2), Rational(5, 2)));
}

TEST_CASE("monotone breakpoints split at kinks and refuse jumps") {
  auto p = monotone_breakpoints(make_power_abs(Rational(2)), Rational(-1), Rational(2));
  REQUIRE(p);
  REQUIRE(p->points.size() == 3);
  CHECK(p->points[1] == Rational(0));

  auto sp = monotone_breakpoints(make_sqrt_periodic(), Rational(0), Rational(5));
  REQUIRE(sp);
  CHECK(sp->points.size() == 6);  // integers 0..5

  CHECK_FALSE(monotone_breakpoints(make_reciprocal(), Rational(-1), Rational(1)));
  auto rec_ok = monotone_breakpoints(make_reciprocal(), Rational(1), Rational(3));
  REQUIRE(rec_ok);
  CHECK(rec_ok->points.size() == 2);

  CHECK_FALSE(monotone_breakpoints(make_sqrt_periodic_deriv(), Rational(1, 2), Rational(3, 2)));
  CHECK(monotone_breakpoints(make_sqrt_periodic_deriv(), Rational(1, 4), Rational(3, 4)));

  CHECK_FALSE(monotone_breakpoints(harmonic_steps(), Rational(0), Rational(1)));

  // Sum: union of summand breakpoints.
  auto su = monotone_breakpoints(make_sum(make_power_abs(Rational(1)), make_sqrt_periodic()),
                                 Rational(-1, 2), Rational(3, 2));
  REQUIRE(su);
  REQUIRE(su->points.size() == 4);
  CHECK(su->points[1] == Rational(0));
  CHECK(su->points[2] == Rational(1));

  CHECK_THROWS_AS(monotone_breakpoints(make_affine(Rational(1), Rational(0)), Rational(2),
                                       Rational(2)),
                  DomainError);
}
