#include "funcspace/function_spec.hpp"

#include <algorithm>

namespace funcspace {
inline namespace functions {

namespace {

FuncPtr wrap(FunctionSpec f) { return std::make_shared<const FunctionSpec>(std::move(f)); }

/// Window index m with x in [2m-1, 2m+1); the periodic pieces live there.
BigInt period_window(const Rational& x) { return floor_of((x + 1) / 2); }

bool is_integer(const Rational& x) { return den(x) == 1; }

const Affine* as_zero(const FuncPtr& f) {
  const auto* a = std::get_if<Affine>(&f->node);
  return (a && a->a == 0 && a->b == 0) ? a : nullptr;
}

}  // namespace

FuncPtr make_affine(const Rational& a, const Rational& b) {
  return wrap(FunctionSpec{Affine{a, b}});
}

FuncPtr make_power_abs(const Rational& e) {
  if (e <= 0) throw DomainError("pow_abs: exponent must be positive");
  return wrap(FunctionSpec{PowerAbs{e, false}});
}

FuncPtr make_power_ext(const Rational& e, bool with_sign) {
  return wrap(FunctionSpec{PowerAbs{e, with_sign}});
}

FuncPtr make_reciprocal() { return wrap(FunctionSpec{Reciprocal{}}); }
FuncPtr make_sqrt_periodic() { return wrap(FunctionSpec{SqrtPeriodic{}}); }
FuncPtr make_sqrt_periodic_deriv() { return wrap(FunctionSpec{SqrtPeriodicDeriv{}}); }

FuncPtr make_step_series(const SeqTerm& coef, const TailDescriptor& placement) {
  if (den(coef.p) != 1)
    throw DomainError("step_series: coefficient exponent must be an integer");
  if (den(placement.width.p) != 1)
    throw DomainError("step_series: width exponent must be an integer");
  if (coef.c == 0) throw DomainError("step_series: zero coefficient");
  if (!placement.disjoint())
    throw DomainError("step_series: placement intervals are not disjoint");
  return wrap(FunctionSpec{StepSeries{coef, placement}});
}

FuncPtr make_scale(const Rational& r, FuncPtr inner) {
  if (r == 0) throw DomainError("scale: factor must be nonzero");
  return wrap(FunctionSpec{Scale{r, std::move(inner)}});
}

FuncPtr make_sum(FuncPtr left, FuncPtr right) {
  return wrap(FunctionSpec{SumOf{std::move(left), std::move(right)}});
}

std::string to_text(const FunctionSpec& f) {
  struct Printer {
    std::string operator()(const Affine& a) const {
      return "affine(" + to_string(a.a) + ", " + to_string(a.b) + ")";
    }
    std::string operator()(const PowerAbs& p) const {
      if (p.e > 0 && !p.with_sign) return "pow_abs(" + to_string(p.e) + ")";
      return "pow_ext(" + to_string(p.e) + (p.with_sign ? ", signed)" : ", abs)");
    }
    std::string operator()(const Reciprocal&) const { return "reciprocal"; }
    std::string operator()(const SqrtPeriodic&) const { return "sqrt_periodic"; }
    std::string operator()(const SqrtPeriodicDeriv&) const { return "deriv(sqrt_periodic)"; }
    std::string operator()(const StepSeries& s) const {
      std::string t = "step_series(coef=" + to_string(s.coef) +
                      ", left=" + to_string(s.placement.left) +
                      ", width=" + to_string(s.placement.width) +
                      ", from=" + std::to_string(s.placement.from_index);
      if (s.placement.mirrored) t += ", mirrored";
      return t + ")";
    }
    std::string operator()(const Scale& s) const {
      return "scale(" + to_string(s.r) + ", " + to_text(*s.inner) + ")";
    }
    std::string operator()(const SumOf& s) const {
      return "sum(" + to_text(*s.left) + ", " + to_text(*s.right) + ")";
    }
  };
  return std::visit(Printer{}, f.node);
}

std::string to_text(const FuncPtr& f) { return to_text(*f); }

bool equal_specs(const FuncPtr& a, const FuncPtr& b) { return to_text(a) == to_text(b); }

CatalogAttributes attributes(const FunctionSpec& f) {
  struct Visitor {
    CatalogAttributes operator()(const Affine&) const {
      return {true, true, true, "affine maps are Lipschitz"};
    }
    CatalogAttributes operator()(const PowerAbs& p) const {
      if (p.e > 0)
        return {true, true, true,
                "|x|^e with e > 0 is the indefinite integral of its integrable derivative"};
      if (p.e == 0 && !p.with_sign) return {true, true, true, "constant"};
      if (p.e == 0 && p.with_sign) return {false, false, true, "sign jumps at 0"};
      return {false, false, true, "unbounded near the pole at 0"};
    }
    CatalogAttributes operator()(const Reciprocal&) const {
      return {false, false, true, "unbounded near the pole at 0"};
    }
    CatalogAttributes operator()(const SqrtPeriodic&) const {
      return {true, true, true,
              "on each period, indefinite integral of its integrable derivative"};
    }
    CatalogAttributes operator()(const SqrtPeriodicDeriv&) const {
      return {false, false, false, "unbounded near even integers"};
    }
    CatalogAttributes operator()(const StepSeries&) const {
      return {false, false, true, "jump discontinuities at step edges"};
    }
    CatalogAttributes operator()(const Scale& s) const {
      CatalogAttributes a = attributes(*s.inner);  // nonzero factor changes nothing
      return a;
    }
    CatalogAttributes operator()(const SumOf& s) const {
      CatalogAttributes l = attributes(*s.left), r = attributes(*s.right);
      CatalogAttributes out;
      out.ac_loc = l.ac_loc && r.ac_loc;
      out.continuity = l.continuity && r.continuity;
      out.derivative_known = l.derivative_known && r.derivative_known;
      out.ac_loc_why = out.ac_loc ? "both summands locally absolutely continuous"
                                  : "a summand fails local absolute continuity";
      return out;
    }
  };
  return std::visit(Visitor{}, f.node);
}

bool continuous_on(const FunctionSpec& f, const Rational& a, const Rational& b) {
  struct Visitor {
    const Rational& a;
    const Rational& b;
    bool pole_free() const { return !(a <= 0 && 0 <= b); }
    bool operator()(const Affine&) const { return true; }
    bool operator()(const PowerAbs& p) const {
      if (p.e > 0) return true;
      if (p.e == 0 && !p.with_sign) return true;
      return pole_free();
    }
    bool operator()(const Reciprocal&) const { return pole_free(); }
    bool operator()(const SqrtPeriodic&) const { return true; }
    bool operator()(const SqrtPeriodicDeriv&) const {
      return ceil_of(a) > floor_of(b);  // no integer in [a, b]
    }
    bool operator()(const StepSeries& s) const {
      const TailDescriptor& t = s.placement;
      for (unsigned long n = t.from_index; n < t.from_index + 4096; ++n) {
        Interval iv = t.interval_at(n);
        if (iv.left > b && (!t.mirrored || Rational(-iv.right) < a)) break;
        if ((a <= iv.left && iv.left <= b) || (a <= iv.right && iv.right <= b)) return false;
        if (t.mirrored) {
          Interval m = t.mirrored_interval_at(n);
          if ((a <= m.left && m.left <= b) || (a <= m.right && m.right <= b)) return false;
        }
      }
      return true;
    }
    bool operator()(const Scale& s) const {
      return continuous_on(*s.inner, a, b);
    }
    bool operator()(const SumOf& s) const {
      return continuous_on(*s.left, a, b) && continuous_on(*s.right, a, b);
    }
  };
  return std::visit(Visitor{a, b}, f.node);
}

Result<Enclosure> evaluate(const FunctionSpec& f, const Rational& x) {
  using R = Result<Enclosure>;
  struct Visitor {
    const Rational& x;
    R operator()(const Affine& a) const {
      return R::ok(Enclosure::point(Rational(a.a * x + a.b)));
    }
    R operator()(const PowerAbs& p) const {
      if (x == 0) {
        if (p.e > 0) return R::ok(Enclosure::point(Rational(0)));
        if (p.e < 0) return R::fail("undefined at 0: negative power");
        return R::fail(p.with_sign ? "sign undefined at 0" : "0^0 left undefined");
      }
      Enclosure mag = pow_enclosure(abs_of(x), p.e);
      if (p.with_sign && x < 0) return R::ok(-mag);
      return R::ok(mag);
    }
    R operator()(const Reciprocal&) const {
      if (x == 0) return R::fail("undefined at 0: pole");
      return R::ok(Enclosure::point(Rational(1 / x)));
    }
    R operator()(const SqrtPeriodic&) const {
      Rational t = x - 2 * Rational(period_window(x));
      return R::ok(sqrt_enclosure(abs_of(t)));
    }
    R operator()(const SqrtPeriodicDeriv&) const {
      if (is_integer(x))
        return R::fail("undefined at integers: pole at even, corner at odd");
      Rational t = x - 2 * Rational(period_window(x));
      Enclosure root = sqrt_enclosure(abs_of(t));
      Enclosure val = scale(Rational(sign_of(t), 2), reciprocal(root));
      return R::ok(val);
    }
    R operator()(const StepSeries& s) const {
      const TailDescriptor& t = s.placement;
      Rational reach = t.mirrored ? abs_of(x) : x;
      for (unsigned long n = t.from_index; n < t.from_index + 4096; ++n) {
        Interval iv = t.interval_at(n);
        if (iv.left > reach) break;
        if (iv.contains(x)) return R::ok(s.coef.value_at(n));
        if (t.mirrored && t.mirrored_interval_at(n).contains(x))
          return R::ok(s.coef.value_at(n));
      }
      return R::ok(Enclosure::point(Rational(0)));
    }
    R operator()(const Scale& s) const {
      R inner = evaluate(*s.inner, x);
      if (!inner) return inner;
      return R::ok(scale(s.r, *inner));
    }
    R operator()(const SumOf& s) const {
      R l = evaluate(*s.left, x);
      if (!l) return l;
      R r = evaluate(*s.right, x);
      if (!r) return r;
      return R::ok(*l + *r);
    }
  };
  return std::visit(Visitor{x}, f.node);
}

namespace {

/// Scale that folds into affine parts and nested scales so derivatives come
/// out in their simplest catalog form.
FuncPtr norm_scale(const Rational& r, FuncPtr g) {
  if (r == 1) return g;
  if (const auto* a = std::get_if<Affine>(&g->node))
    return make_affine(Rational(r * a->a), Rational(r * a->b));
  if (const auto* s = std::get_if<Scale>(&g->node))
    return norm_scale(Rational(r * s->r), s->inner);
  return make_scale(r, std::move(g));
}

FuncPtr norm_sum(FuncPtr l, FuncPtr r) {
  if (as_zero(l)) return r;
  if (as_zero(r)) return l;
  return make_sum(std::move(l), std::move(r));
}

}  // namespace

Result<FuncPtr> derivative(const FunctionSpec& f) {
  using R = Result<FuncPtr>;
  struct Visitor {
    R operator()(const Affine& a) const { return R::ok(make_affine(0, a.a)); }
    R operator()(const PowerAbs& p) const {
      if (p.e == 0) return R::ok(make_affine(0, 0));  // constants and sign: 0 a.e.
      if (p.e == 1) {
        if (p.with_sign) return R::ok(make_affine(0, 1));  // |x| sign(x) = x, slope 1
        return R::ok(make_power_ext(0, true));             // d/dx |x| = sign(x)
      }
      return R::ok(norm_scale(p.e, make_power_ext(Rational(p.e - 1), !p.with_sign)));
    }
    R operator()(const Reciprocal&) const {
      return R::ok(norm_scale(-1, make_power_ext(-2, false)));  // -1/x^2
    }
    R operator()(const SqrtPeriodic&) const { return R::ok(make_sqrt_periodic_deriv()); }
    R operator()(const SqrtPeriodicDeriv&) const {
      return R::fail("second derivative of the periodic sqrt leaves the catalog");
    }
    R operator()(const StepSeries&) const {
      // Zero a.e.; the function itself is not AC_loc (attribute), so this
      // derivative is for integration only, never for FTC reconstruction.
      return R::ok(make_affine(0, 0));
    }
    R operator()(const Scale& s) const {
      R inner = derivative(*s.inner);
      if (!inner) return inner;
      return R::ok(norm_scale(s.r, *inner));
    }
    R operator()(const SumOf& s) const {
      R l = derivative(*s.left);
      if (!l) return l;
      R r = derivative(*s.right);
      if (!r) return r;
      return R::ok(norm_sum(*l, *r));
    }
  };
  return std::visit(Visitor{}, f.node);
}

namespace {

Result<std::monostate> gather_breakpoints(const FunctionSpec& f, const Rational& a,
                                          const Rational& b, std::vector<Rational>& pts) {
  using R = Result<std::monostate>;
  struct Visitor {
    const Rational& a;
    const Rational& b;
    std::vector<Rational>& pts;
    bool zero_inside() const { return a < 0 && 0 < b; }
    bool zero_touches() const { return a <= 0 && 0 <= b; }
    R ok() const { return R::ok(std::monostate{}); }
    R operator()(const Affine&) const { return ok(); }
    R operator()(const PowerAbs& p) const {
      if (p.e > 0) {
        if (!p.with_sign && zero_inside()) pts.push_back(0);
        return ok();  // signed powers with e > 0 increase monotonically
      }
      if (p.e == 0 && !p.with_sign) return ok();
      if (zero_touches())
        return R::fail(p.e < 0 ? "pole at 0 inside range" : "sign jump inside range");
      return ok();
    }
    R operator()(const Reciprocal&) const {
      if (zero_touches()) return R::fail("pole at 0 inside range");
      return ok();
    }
    R operator()(const SqrtPeriodic&) const {
      for (BigInt i = floor_of(a) + 1; Rational(i) < b; ++i) pts.push_back(Rational(i));
      return ok();
    }
    R operator()(const SqrtPeriodicDeriv&) const {
      if (ceil_of(a) <= floor_of(b))
        return R::fail("periodic derivative undefined at an integer in range");
      return ok();
    }
    R operator()(const StepSeries&) const {
      return R::fail("step function has no monotone decomposition; use jump sums");
    }
    R operator()(const Scale& s) const { return gather_breakpoints(*s.inner, a, b, pts); }
    R operator()(const SumOf& s) const {
      R l = gather_breakpoints(*s.left, a, b, pts);
      if (!l) return l;
      return gather_breakpoints(*s.right, a, b, pts);
    }
  };
  return std::visit(Visitor{a, b, pts}, f.node);
}

}  // namespace

Result<Partition> monotone_breakpoints(const FunctionSpec& f, const Rational& a,
                                       const Rational& b) {
  if (a >= b) throw DomainError("monotone_breakpoints: need a < b");
  std::vector<Rational> interior;
  auto r = gather_breakpoints(f, a, b, interior);
  if (!r) return Result<Partition>::fail(r.error());
  std::sort(interior.begin(), interior.end());
  interior.erase(std::unique(interior.begin(), interior.end()), interior.end());
  Partition p;
  p.points.push_back(a);
  for (auto& q : interior)
    if (a < q && q < b) p.points.push_back(q);
  p.points.push_back(b);
  return Result<Partition>::ok(std::move(p));
}

}  // namespace functions
}  // namespace funcspace
