#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hardy/piecewise.hpp"
#include "hardy/rng.hpp"
#include "testutil.hpp"

using namespace hardy;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("evaluate: constant piece and outside support") {
  auto f = PiecewiseFunction::single({0.0, 1.0}, {Term{1.0, 0, 0}});
  CHECK(f(0.5) == 1.0);
  CHECK(f(2.0) == 0.0);
  CHECK_THROWS_AS(f(0.0), std::domain_error);
  CHECK_THROWS_AS(f(-1.0), std::domain_error);
}

TEST_CASE("evaluate: half-open boundary convention") {
  const double e = std::exp(1.0);
  auto f = PiecewiseFunction::single({1.0, e}, {Term{1.0, -1, 1}});  // ln(x)/x
  CHECK(f(e) == 0.0);  // [lo, hi): the right endpoint is outside
  CHECK_THAT(f(e - 1e-9), WithinRel(1.0 / e, 1e-6));
  CHECK(f(1.0) == 0.0);  // ln 1 = 0, inside the piece
}

TEST_CASE("antiderivative: closed forms") {
  SECTION("power rule") {
    auto F = antiderivative({Term{1.0, 1, 0}});
    REQUIRE(F.size() == 1);
    CHECK(F[0].coeff == 0.5);
    CHECK(F[0].power == 2);
    CHECK(F[0].log_exp == 0);
  }
  SECTION("reciprocal gives the logarithm") {
    auto F = antiderivative({Term{1.0, -1, 0}});
    REQUIRE(F.size() == 1);
    CHECK(F[0].power == 0);
    CHECK(F[0].log_exp == 1);
    CHECK(F[0].coeff == 1.0);
  }
  SECTION("x ln x - x") {
    auto F = antiderivative({Term{1.0, 0, 1}});
    // expect 1*x^1*ln x - 1*x^1
    REQUIRE(F.size() == 2);
    double at2 = detail::eval_terms(F, 2.0);
    CHECK_THAT(at2, WithinRel(2.0 * std::log(2.0) - 2.0, 1e-15));
  }
  SECTION("x^-1 (ln x)^2 leaves the class") {
    CHECK_THROWS_AS(antiderivative({Term{1.0, -1, 2}}), unsupported_term_error);
  }
}

TEST_CASE("antiderivative: differentiate-back on random generalized terms") {
  Rng rng(2024);
  for (int rep = 0; rep < 40; ++rep) {
    auto terms = testutil::random_terms(rng, 4);
    std::vector<Term> ok;
    for (const auto& t : terms) {
      if (!(t.power == -1 && t.log_exp == 2)) ok.push_back(t);
    }
    std::vector<Term> F;
    try {
      F = antiderivative(ok);
    } catch (const unsupported_term_error&) {
      continue;
    }
    for (int i = 0; i < 64; ++i) {
      double x = rng.uniform(0.1, 10.0);
      double want = detail::eval_terms(ok, x);
      double got = testutil::num_derivative(
          [&](double u) { return detail::eval_terms(F, u); }, x);
      double scale = std::max(1.0, std::abs(want));
      REQUIRE_THAT(got, WithinAbs(want, 1e-7 * scale));
    }
  }
}

TEST_CASE("definite_integral: examples") {
  auto one = PiecewiseFunction::single({0.0, 1.0}, {Term{1.0, 0, 0}});
  CHECK_THAT(definite_integral(one, 0.0, 1.0), WithinAbs(1.0, 1e-15));

  auto lin = PiecewiseFunction::single({1.0, 2.0}, {Term{1.0, 1, 0}});
  CHECK_THAT(definite_integral(lin, 1.0, 2.0), WithinAbs(1.5, 1e-15));

  const double e = std::exp(1.0);
  auto lg = PiecewiseFunction::single({1.0, e}, {Term{1.0, 0, 1}});
  CHECK_THAT(definite_integral(lg, 1.0, e), WithinRel(1.0, 1e-14));
}

TEST_CASE("definite_integral: additivity and linearity properties") {
  Rng rng(7);
  for (int rep = 0; rep < 25; ++rep) {
    auto f = testutil::random_polynomial(rng, 3, 4);
    auto sup = f.support().value();
    double a = rng.uniform(sup.lo, sup.hi);
    double c = rng.uniform(a, sup.hi);
    double b = rng.uniform(a, c);
    double whole = definite_integral(f, a, c);
    double split = definite_integral(f, a, b) + definite_integral(f, b, c);
    REQUIRE_THAT(split, WithinAbs(whole, 1e-12 * std::max(1.0, std::abs(whole))));

    auto g = testutil::random_polynomial(rng, 2, 3);
    double ca = rng.uniform(-2.0, 2.0), cb = rng.uniform(-2.0, 2.0);
    auto comb = linear_combine({{ca, f}, {cb, g}});
    double lhs = definite_integral(comb, 0.0, 12.0);
    double rhs = ca * definite_integral(f, 0.0, 12.0) +
                 cb * definite_integral(g, 0.0, 12.0);
    REQUIRE_THAT(lhs, WithinAbs(rhs, 1e-12 * std::max(1.0, std::abs(rhs))));
  }
}

TEST_CASE("linear_combine: scaling, cancellation, overlap") {
  auto f = PiecewiseFunction::single({0.0, 1.0}, {Term{1.0, 0, 0}});
  auto two = linear_combine({{2.0, f}});
  CHECK(two(0.5) == 2.0);

  auto zero = linear_combine({{1.0, f}, {-1.0, f}});
  CHECK(zero.is_zero());

  auto g = PiecewiseFunction::single({0.5, 2.0}, {Term{1.0, 0, 0}});
  auto sum = linear_combine({{1.0, f}, {1.0, g}});
  REQUIRE(sum.pieces().size() == 3);
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    double x = rng.uniform(0.01, 2.5);
    REQUIRE_THAT(sum(x), WithinAbs(f(x) + g(x), 1e-15));
  }
}

TEST_CASE("dilate: g(x) = f(lambda x) pointwise, log terms included") {
  Rng rng(11);
  auto f = PiecewiseFunction::single(
      {0.5, 3.0}, {Term{1.5, -1, 1}, Term{-0.25, 2, 2}, Term{2.0, 0, 0}});
  for (double lambda : {0.5, 2.0, 10.0}) {
    auto g = dilate(f, lambda);
    for (int i = 0; i < 60; ++i) {
      double x = rng.uniform(0.5 / lambda, 3.0 / lambda);
      REQUIRE_THAT(g(x), WithinAbs(f(lambda * x),
                                   1e-13 * std::max(1.0, std::abs(f(lambda * x)))));
    }
  }
}

TEST_CASE("sign_change_points: examples") {
  auto lin = PiecewiseFunction::single({1.0, 2.0}, {Term{1.0, 1, 0}, Term{-1.5, 0, 0}});
  auto r = sign_change_points(lin, 1e-10);
  REQUIRE(r.size() == 1);
  CHECK_THAT(r[0], WithinAbs(1.5, 1e-9));

  auto cst = PiecewiseFunction::single({0.0, 1.0}, {Term{1.0, 0, 0}});
  CHECK(sign_change_points(cst, 1e-10).empty());

  // 6x^2 - 6x + 1 has roots (3 +- sqrt 3)/6
  auto quad = PiecewiseFunction::single(
      {0.0, 1.0}, {Term{6.0, 2, 0}, Term{-6.0, 1, 0}, Term{1.0, 0, 0}});
  auto roots = sign_change_points(quad, 1e-12);
  REQUIRE(roots.size() == 2);
  CHECK_THAT(roots[0], WithinAbs((3.0 - std::sqrt(3.0)) / 6.0, 1e-10));
  CHECK_THAT(roots[1], WithinAbs((3.0 + std::sqrt(3.0)) / 6.0, 1e-10));
}

TEST_CASE("sign_change_points: located points bracket a sign change") {
  Rng rng(19);
  for (int rep = 0; rep < 20; ++rep) {
    auto f = testutil::random_polynomial(rng, 2, 5);
    const double tol = 1e-9;
    for (double x : sign_change_points(f, tol)) {
      const Piece* p = f.piece_at(x);
      REQUIRE(p != nullptr);
      double a = std::max(p->span.lo * (1 + 1e-14), x - tol);
      double b = std::min(p->span.hi * (1 - 1e-14), x + tol);
      REQUIRE(f(a) * f(b) <= 0.0);
    }
  }
}

TEST_CASE("definite_integral propagates unsupported terms") {
  auto f = PiecewiseFunction::single({1.0, 2.0}, {Term{1.0, -1, 2}});
  CHECK_THROWS_AS(definite_integral(f, 1.0, 2.0), unsupported_term_error);
}

TEST_CASE("from_pieces rejects malformed input") {
  CHECK_THROWS_AS(PiecewiseFunction::single({2.0, 1.0}, {Term{1.0, 0, 0}}),
                  parameter_domain_error);
  CHECK_THROWS_AS(PiecewiseFunction::single({0.0, 1.0}, {Term{1.0, -3, 0}}),
                  parameter_domain_error);
  CHECK_THROWS_AS(PiecewiseFunction::single({0.0, 1.0}, {Term{1.0, 0, 3}}),
                  parameter_domain_error);
  CHECK_THROWS_AS(
      PiecewiseFunction::from_pieces({Piece{{0.0, 1.5}, {Term{1.0, 0, 0}}},
                                      Piece{{1.0, 2.0}, {Term{1.0, 0, 0}}}}),
      parameter_domain_error);
}
