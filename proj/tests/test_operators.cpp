#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hardy/atoms.hpp"
#include "hardy/operators.hpp"
#include "hardy/quadrature.hpp"
#include "testutil.hpp"

using namespace hardy;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("apply_hardy: constant input grows a 1/x tail") {
  auto one = PiecewiseFunction::single({0.0, 1.0}, {Term{1.0, 0, 0}});
  auto img = apply_hardy(one);
  CHECK_FALSE(img.compact_support);
  CHECK(img.unbounded_tail);
  CHECK_THAT(img.tail_coeff, WithinAbs(1.0, 1e-15));
  CHECK(img.tail_start == 1.0);
  CHECK(img.horizon == 1e6);
  CHECK_THAT(img.fn(0.5), WithinAbs(1.0, 1e-15));
  CHECK_THAT(img.fn(10.0), WithinRel(0.1, 1e-14));
}

TEST_CASE("apply_hardy: square wave image in closed form") {
  auto sq = PiecewiseFunction::from_pieces({Piece{{0.0, 0.5}, {Term{1.0, 0, 0}}},
                                            Piece{{0.5, 1.0}, {Term{-1.0, 0, 0}}}});
  auto img = apply_hardy(sq);
  CHECK(img.compact_support);
  CHECK_FALSE(img.unbounded_tail);
  CHECK_THAT(img.fn(0.3), WithinAbs(1.0, 1e-15));
  for (double x : {0.55, 0.7, 0.95}) {
    CHECK_THAT(img.fn(x), WithinRel((1.0 - x) / x, 1e-13));
  }
  CHECK(img.fn(1.5) == 0.0);
}

TEST_CASE("apply_hardy: built atoms have compact images") {
  AtomSpec spec;
  spec.p = 0.5;
  spec.q = 2.0;
  spec.interval = {1.0, 2.0};
  Atom a = build_atom(spec, 3, 8);
  auto img = apply_hardy(a.fn);
  CHECK(img.compact_support);
  auto hull = img.fn.support().value();
  CHECK(hull.lo >= 1.0 - 1e-12);
  CHECK(hull.hi <= 2.0 + 1e-12);
}

TEST_CASE("apply_dual_hardy: examples") {
  auto one = PiecewiseFunction::single({0.0, 1.0}, {Term{1.0, 0, 0}});
  auto img = apply_dual_hardy(one);
  CHECK_FALSE(img.compact_support);  // total mass 1 extends left (here to 0)
  CHECK_FALSE(img.unbounded_tail);
  for (double x : {0.2, 0.5, 0.9}) {
    CHECK_THAT(img.fn(x), WithinAbs(1.0 - x, 1e-15));
  }
  CHECK(img.fn(1.5) == 0.0);

  auto sq = PiecewiseFunction::from_pieces({Piece{{1.0, 1.5}, {Term{1.0, 0, 0}}},
                                            Piece{{1.5, 2.0}, {Term{-1.0, 0, 0}}}});
  auto imgz = apply_dual_hardy(sq);
  CHECK(imgz.compact_support);
  CHECK(imgz.fn(0.5) == 0.0);  // vanishing mean: zero left of the support

  auto lin = PiecewiseFunction::single({1.0, 2.0}, {Term{1.0, 1, 0}});
  auto imgl = apply_dual_hardy(lin);
  for (double x : {1.1, 1.5, 1.9}) {
    CHECK_THAT(imgl.fn(x), WithinRel((4.0 - x * x) / 2.0, 1e-14));
  }
}

TEST_CASE("pointwise oracle: H against raw quadrature at random points") {
  Rng rng(501);
  for (int rep = 0; rep < 4; ++rep) {
    auto f = testutil::random_polynomial(rng, 3, 4);
    auto img = apply_hardy(f);
    auto sup = f.support().value();
    double fscale = sup_norm(f);
    for (int i = 0; i < 64; ++i) {
      double x = rng.uniform(sup.lo * 0.5, sup.hi * 1.2);
      // integrate piece by piece so the oracle integrand stays smooth
      double inner = 0.0;
      for (const auto& piece : f.pieces()) {
        double hi = std::min(piece.span.hi, x);
        if (hi <= piece.span.lo) continue;
        inner += adaptive_integrate(
                     [&](double t) { return hardy::detail::eval_terms(piece.terms, t); },
                     piece.span.lo, hi, 1e-12)
                     .value;
      }
      double want = inner / x;
      REQUIRE_THAT(img.fn(x), WithinAbs(want, 1e-9 * std::max(1.0, fscale)));
    }
  }
}

TEST_CASE("dilation commutation: H(f(l.))(x) = (Hf)(l x)") {
  Rng rng(77);
  auto f = testutil::random_polynomial(rng, 2, 3);
  for (double lambda : {0.5, 2.0}) {
    auto left = apply_hardy(dilate(f, lambda));
    auto right = apply_hardy(f);
    auto sup = f.support().value();
    for (int i = 0; i < 64; ++i) {
      double x = rng.uniform(sup.lo / lambda + 1e-12, sup.hi / lambda - 1e-12);
      double a = left.fn(x);
      double b = right.fn(lambda * x);
      REQUIRE_THAT(a, WithinAbs(b, 1e-10 * std::max(1.0, std::abs(b))));
    }
  }
}

TEST_CASE("hardy_image_atom_candidate: scales and validation") {
  AtomSpec lspec;
  lspec.p = 1.0;
  lspec.q = kInfinity;
  lspec.s = 1;
  lspec.interval = {1.0, 2.0};
  lspec.log_moment = true;
  Atom a = build_atom(lspec, 4, 3);
  auto c = hardy_image_atom_candidate(a);
  CHECK(c.scale == 1.0);  // inf' = 1
  CHECK_FALSE(c.target_spec.log_moment);

  AtomSpec l2 = lspec;
  l2.q = 2.0;
  l2.s = 1;
  l2.p = 1.0;
  Atom b = build_atom(l2, 4, 4);
  auto c2 = hardy_image_atom_candidate(b);
  CHECK(c2.scale == 0.5);
  auto rep = validate_atom(c2.fn, c2.target_spec, 1e-9);
  CHECK(rep.support_ok);
  CHECK(rep.moments_ok);
  CHECK(rep.size_strict_ok);

  AtomSpec noq = lspec;
  noq.q = 1.0;
  noq.p = 0.5;
  Atom d = build_atom(noq, 4, 5);
  CHECK_THROWS_AS(hardy_image_atom_candidate(d), parameter_domain_error);
  AtomSpec nolog = lspec;
  nolog.log_moment = false;
  Atom e = build_atom(nolog, 4, 6);
  CHECK_THROWS_AS(hardy_image_atom_candidate(e), parameter_domain_error);
}

TEST_CASE("dual_image_atom_candidate: the three scales") {
  auto build_weighted = [](double p, double q, int s) {
    AtomSpec spec;
    spec.p = p;
    spec.q = q;
    spec.s = s;
    spec.weight = Weight::power(p);
    spec.interval = {1.0, 2.0};
    return build_atom(spec, s + 2, 17);
  };
  CHECK_THAT(dual_image_atom_candidate(build_weighted(1.0, kInfinity, 1)).scale,
             WithinAbs(0.5, 1e-15));
  CHECK_THAT(dual_image_atom_candidate(build_weighted(0.5, 1.0, 1)).scale,
             WithinRel(1.0 / 3.0, 1e-14));
  CHECK_THAT(dual_image_atom_candidate(build_weighted(0.5, 3.0, 1)).scale,
             WithinRel(1.0 / 3.0, 1e-15));

  Atom s0 = build_weighted(0.5, 2.0, 0);
  CHECK_THROWS_AS(dual_image_atom_candidate(s0), parameter_domain_error);
}

TEST_CASE("moment shift: H* of a weighted atom drops one moment order") {
  AtomSpec spec;
  spec.p = 0.5;
  spec.q = 2.0;
  spec.s = 2;
  spec.weight = Weight::power(0.5);
  spec.interval = {0.5, 2.5};
  Atom a = build_atom(spec, 4, 23);
  auto c = dual_image_atom_candidate(a);
  double sc = spec.moment_scale();
  for (int beta = 0; beta <= 1; ++beta) {
    REQUIRE_THAT(moment(c.fn, beta), WithinAbs(0.0, 1e-9 * sc));
  }
}

TEST_CASE("log-moment consumption: moments of Ha vanish up to s") {
  AtomSpec spec;
  spec.p = 0.5;
  spec.q = kInfinity;
  spec.s = 2;
  spec.interval = {1.0, 3.0};
  spec.log_moment = true;
  Atom a = build_atom(spec, 5, 15);
  auto img = apply_hardy(a.fn);
  double sc = spec.moment_scale();
  for (int beta = 0; beta <= 2; ++beta) {
    REQUIRE_THAT(moment(img.fn, beta), WithinAbs(0.0, 1e-9 * sc));
  }
}

TEST_CASE("lp of an unbounded tail: exact remainder or divergence") {
  auto one = PiecewiseFunction::single({0.0, 1.0}, {Term{1.0, 0, 0}});
  auto img = apply_hardy(one);
  CHECK_THROWS_AS(lp_integral(img, 1.0, Weight::unit(), 1e-10), divergence_error);
  CHECK_THROWS_AS(lp_integral(img, 0.5, Weight::unit(), 1e-10), divergence_error);
  // int_0^inf (Hf)^2 = 1 + int_1^inf x^{-2} = 2 exactly
  auto r = lp_integral(img, 2.0, Weight::unit(), 1e-11);
  CHECK_THAT(r.value, WithinRel(2.0, 1e-10));
}
