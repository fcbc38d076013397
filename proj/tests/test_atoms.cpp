#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hardy/atoms.hpp"
#include "hardy/serialization.hpp"
#include "testutil.hpp"

using namespace hardy;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

AtomSpec make_spec(double p, double q, int s, Weight w, Interval iv,
                   bool log_moment = false, bool allow_zero = false) {
  AtomSpec spec;
  spec.p = p;
  spec.q = q;
  spec.s = s;
  spec.weight = w;
  spec.interval = iv;
  spec.log_moment = log_moment;
  spec.allow_zero_left = allow_zero;
  return spec;
}

}  // namespace

TEST_CASE("weight_mass: unit, integer power, fractional power") {
  CHECK(weight_mass(Weight::unit(), {1.0, 2.0}) == 1.0);
  CHECK_THAT(weight_mass(Weight::power(1.0), {0.0, 1.0}), WithinAbs(0.5, 1e-15));
  // quadrature oracle for the fractional case
  double oracle = testutil::simpson([](double x) { return std::sqrt(x); }, 1.0,
                                    4.0, 20000);
  CHECK_THAT(weight_mass(Weight::power(0.5), {1.0, 4.0}), WithinRel(14.0 / 3.0, 1e-14));
  CHECK_THAT(weight_mass(Weight::power(0.5), {1.0, 4.0}), WithinRel(oracle, 1e-9));
}

TEST_CASE("moment: examples") {
  auto one = PiecewiseFunction::single({0.0, 1.0}, {Term{1.0, 0, 0}});
  CHECK_THAT(moment(one, 0), WithinAbs(1.0, 1e-15));

  auto sq = PiecewiseFunction::from_pieces({Piece{{1.0, 1.5}, {Term{1.0, 0, 0}}},
                                            Piece{{1.5, 2.0}, {Term{-1.0, 0, 0}}}});
  CHECK_THAT(moment(sq, 0), WithinAbs(0.0, 1e-15));

  auto quad = PiecewiseFunction::single(
      {0.0, 1.0}, {Term{6.0, 2, 0}, Term{-6.0, 1, 0}, Term{1.0, 0, 0}});
  CHECK_THAT(moment(quad, 1), WithinAbs(0.0, 1e-15));  // 6/4 - 2 + 1/2
}

TEST_CASE("log_moment: examples") {
  const double e = std::exp(1.0);
  auto one = PiecewiseFunction::single({1.0, e}, {Term{1.0, 0, 0}});
  CHECK_THAT(log_moment(one), WithinRel(1.0, 1e-14));

  // symmetric square wave on (1/e, e): oracle by quadrature of ln x
  auto sw = PiecewiseFunction::from_pieces(
      {Piece{{1.0 / e, 1.0}, {Term{1.0, 0, 0}}},
       Piece{{1.0, e}, {Term{-1.0, 0, 0}}}});
  double oracle =
      testutil::simpson([](double x) { return std::log(x); }, 1.0 / e, 1.0, 40000) -
      testutil::simpson([](double x) { return std::log(x); }, 1.0, e, 40000);
  double got = log_moment(sw);
  CHECK_THAT(got, WithinAbs(oracle, 1e-9));
  CHECK(std::abs(got) > 0.1);  // not zero: the log moment is a real constraint

  CHECK(log_moment(PiecewiseFunction::zero()) == 0.0);
}

TEST_CASE("build_atom: validator accepts the result") {
  auto spec = make_spec(1.0, kInfinity, 0, Weight::unit(), {1.0, 2.0});
  Atom a = build_atom(spec, 1, 12345);
  auto rep = validate_atom(a.fn, spec, 1e-9);
  CHECK(rep.passed());
  CHECK_FALSE(rep.trivial);
}

TEST_CASE("build_atom: hand-solved moment system (shifted Legendre shape)") {
  auto spec = make_spec(0.5, 2.0, 1, Weight::unit(), {0.0, 1.0}, false, true);
  Atom a = build_atom(spec, 2, 99);
  // fn must be proportional to 6x^2 - 6x + 1, scaled so the L^2 norm is
  // |I|^{1/2 - 2} = 1; the proportionality constant is +-sqrt(5).
  REQUIRE(a.fn.pieces().size() == 1);
  CHECK_THAT(std::abs(a.fn(1e-18)), WithinRel(std::sqrt(5.0), 1e-9));
  CHECK_THAT(std::abs(a.fn(1.0 - 1e-12)), WithinRel(std::sqrt(5.0), 1e-6));
  CHECK_THAT(lq_norm(a.fn, 2.0, Weight::unit(), 1e-12), WithinRel(1.0, 1e-10));
  CHECK_THAT(moment(a.fn, 0), WithinAbs(0.0, 1e-12));
  CHECK_THAT(moment(a.fn, 1), WithinAbs(0.0, 1e-12));
}

TEST_CASE("build_atom: log-moment feasibility needs one extra degree") {
  auto spec = make_spec(0.5, 2.0, 0, Weight::unit(), {1.0, 2.0}, true);
  CHECK_THROWS_AS(build_atom(spec, 1, 5), infeasible_error);
  Atom a = build_atom(spec, 2, 5);
  auto rep = validate_atom(a.fn, spec, 1e-9);
  CHECK(rep.passed());
  CHECK(rep.log_moment_ok);
}

TEST_CASE("build_atom: ill-conditioned interval raises a rank error") {
  auto spec = make_spec(0.5, 2.0, 3, Weight::unit(), {100.0, 100.0 + 1e-7});
  CHECK_THROWS_AS(build_atom(spec, 5, 1), numerical_rank_error);
}

TEST_CASE("validate_atom: square wave against (1, inf, 0) and s = 1") {
  Atom sw = square_wave_atom(1.0, kInfinity, {1.0, 2.0});
  auto rep = validate_atom(sw.fn, sw.spec, 1e-9);
  CHECK(rep.passed());
  CHECK_THAT(rep.norm_measured, WithinRel(1.0, 1e-12));  // budget |I|^{-1} = 1

  AtomSpec s1 = sw.spec;
  s1.s = 1;
  auto rep1 = validate_atom(sw.fn, s1, 1e-9);
  CHECK_FALSE(rep1.passed());
  CHECK_FALSE(rep1.moments_ok);
  CHECK_THAT(rep1.moments[1], WithinAbs(-0.25, 1e-12));

  auto zero = validate_atom(PiecewiseFunction::zero(), sw.spec, 1e-9);
  CHECK(zero.trivial);
  CHECK(zero.support_ok);
  CHECK(zero.size_ok);
  CHECK(zero.moments_ok);
}

TEST_CASE("atoms from build_atom validate across a parameter grid") {
  for (double p : {0.3, 0.5, 0.8, 1.0}) {
    for (double q : {1.0, 2.0, 4.0, kInfinity}) {
      if (!is_inf(q) && !(p < q)) continue;
      for (Interval iv : {Interval{1.0, 2.0}, Interval{0.01, 1.0}}) {
        auto spec = make_spec(p, q, 0, Weight::unit(), iv);
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
          Atom a = build_atom(spec, 2, seed);
          auto rep = validate_atom(a.fn, spec, 1e-9);
          REQUIRE(rep.passed());
        }
      }
    }
  }
}

TEST_CASE("seed determinism: identical inputs give bit-identical atoms") {
  auto spec = make_spec(0.5, 2.0, 1, Weight::power(0.5), {0.5, 3.0});
  Atom a = build_atom(spec, 4, 777);
  Atom b = build_atom(spec, 4, 777);
  REQUIRE(a.fn.pieces().size() == b.fn.pieces().size());
  for (std::size_t i = 0; i < a.fn.pieces().size(); ++i) {
    const auto& pa = a.fn.pieces()[i];
    const auto& pb = b.fn.pieces()[i];
    REQUIRE(pa.terms.size() == pb.terms.size());
    for (std::size_t t = 0; t < pa.terms.size(); ++t) {
      REQUIRE(pa.terms[t].coeff == pb.terms[t].coeff);  // bit-identical
      REQUIRE(pa.terms[t].power == pb.terms[t].power);
    }
  }
  Atom c = build_atom(spec, 4, 778);
  bool same = true;
  for (std::size_t t = 0; t < c.fn.pieces()[0].terms.size(); ++t) {
    if (c.fn.pieces()[0].terms[t].coeff != a.fn.pieces()[0].terms[t].coeff) {
      same = false;
    }
  }
  CHECK_FALSE(same);
}

TEST_CASE("dilation closure: lambda^{1/p} a(lambda x) stays an atom") {
  auto spec = make_spec(0.5, 2.0, 0, Weight::unit(), {1.0, 2.0});
  Atom a = build_atom(spec, 2, 31);
  for (double lambda : {0.5, 2.0, 10.0}) {
    auto tilt = scale(dilate(a.fn, lambda), std::pow(lambda, 1.0 / spec.p));
    AtomSpec dspec = spec;
    dspec.interval = {spec.interval.lo / lambda, spec.interval.hi / lambda};
    auto rep = validate_atom(tilt, dspec, 1e-9);
    REQUIRE(rep.passed());
  }
}

TEST_CASE("norm saturation across q regimes") {
  for (double q : {1.0, 2.0, 4.0, kInfinity}) {
    auto spec = make_spec(0.5, q, 0, Weight::unit(), {0.25, 1.75});
    Atom a = build_atom(spec, 3, 4242);
    double measured = lq_norm(a.fn, q, Weight::unit(), 1e-12);
    REQUIRE_THAT(measured, WithinRel(a.norm_budget, 1e-10));
  }
  // weighted saturation
  auto wspec = make_spec(0.5, 2.0, 0, Weight::power(0.5), {1.0, 2.0});
  Atom wa = build_atom(wspec, 3, 11);
  REQUIRE_THAT(lq_norm(wa.fn, 2.0, Weight::power(0.5), 1e-12),
               WithinRel(wa.norm_budget, 1e-10));
}

TEST_CASE("step atoms: square wave is the 2-step saturated atom") {
  Atom sw = square_wave_atom(1.0, kInfinity, {0.5, 1.0});
  CHECK_THAT(sw.fn(0.6), WithinRel(2.0, 1e-15));   // |I|^{-1} = 2
  CHECK_THAT(sw.fn(0.9), WithinRel(-2.0, 1e-15));
  auto spec = make_spec(0.5, 2.0, 1, Weight::unit(), {1.0, 3.0});
  Atom st = build_step_atom(spec, 6, 9);
  auto rep = validate_atom(st.fn, spec, 1e-9);
  CHECK(rep.passed());
  CHECK(st.fn.pieces().size() <= 6);
}

TEST_CASE("atomic sums: quasinorm upper bound") {
  auto spec = make_spec(0.5, 2.0, 0, Weight::unit(), {1.0, 2.0});
  Atom a = build_atom(spec, 2, 1);
  Atom b = build_atom(spec, 2, 2);

  auto single = make_atomic_sum({{1.0, a}});
  CHECK_THAT(sum_quasinorm_upper(single), WithinAbs(1.0, 1e-15));

  auto pair = make_atomic_sum({{1.0, a}, {1.0, b}});
  CHECK_THAT(sum_quasinorm_upper(pair), WithinRel(4.0, 1e-14));  // (1+1)^{1/0.5}

  AtomSpec p1 = spec;
  p1.p = 1.0;
  Atom c = build_atom(p1, 2, 3);
  Atom d = build_atom(p1, 2, 4);
  auto lin = make_atomic_sum({{3.0, c}, {4.0, d}});
  CHECK_THAT(sum_quasinorm_upper(lin), WithinAbs(7.0, 1e-13));

  CHECK_THROWS_AS(make_atomic_sum({{1.0, a}, {1.0, c}}), parameter_domain_error);
  CHECK_THROWS_AS(make_atomic_sum({}), parameter_domain_error);
}

TEST_CASE("atom spec guards") {
  CHECK_THROWS_AS(make_spec(1.5, kInfinity, 0, Weight::unit(), {1.0, 2.0}).validate(),
                  parameter_domain_error);
  CHECK_THROWS_AS(make_spec(1.0, 1.0, 0, Weight::unit(), {1.0, 2.0}).validate(),
                  parameter_domain_error);
  CHECK_THROWS_AS(make_spec(0.5, 2.0, 0, Weight::unit(), {0.0, 2.0}).validate(),
                  parameter_domain_error);
  CHECK_NOTHROW(
      make_spec(0.5, 2.0, 0, Weight::unit(), {0.0, 2.0}, false, true).validate());
  CHECK_THROWS_AS(Weight::power(-1.0), parameter_domain_error);
}
