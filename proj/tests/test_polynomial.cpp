#include <doctest.h>

#include "oracles.hpp"
#include "pjd/error.hpp"
#include "pjd/expr.hpp"
#include "pjd/polynomial.hpp"
#include "pjd/rational.hpp"

using namespace pjd;

namespace {

const StateSpace I = StateSpace::interval();
const StateSpace S3 = StateSpace::simplex(3);

Polynomial X() { return Polynomial::variable(I, 0); }

}  // namespace

TEST_CASE("basis enumeration") {
  auto b = enumerate_basis(I, 2);
  REQUIRE(b.size() == 3);
  CHECK(b[0] == MultiIndex{0});
  CHECK(b[1] == MultiIndex{1});
  CHECK(b[2] == MultiIndex{2});

  auto s = enumerate_basis(S3, 1);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == MultiIndex{0, 0});
  CHECK(s[1] == MultiIndex{1, 0});
  CHECK(s[2] == MultiIndex{0, 1});

  // stars and bars: C(N + n, n) monomials of degree <= N in n variables
  for (int d = 2; d <= 5; ++d)
    for (int N = 0; N <= 4; ++N)
      CHECK(enumerate_basis(StateSpace::simplex(d), N).size() ==
            static_cast<std::size_t>(oracle::binomial(N + d - 1, d - 1)));
}

TEST_CASE("simplex reduction") {
  const Polynomial x1 = Polynomial::coordinate(S3, 0);
  const Polynomial x2 = Polynomial::coordinate(S3, 1);
  const Polynomial x3 = Polynomial::coordinate(S3, 2);
  CHECK((x1 + x2 + x3).approx_equal(Polynomial::constant(S3, 1.0), 1e-15));
  CHECK(x3.coefficient({0, 0}) == 1.0);
  CHECK(x3.coefficient({1, 0}) == -1.0);
  CHECK(x3.coefficient({0, 1}) == -1.0);

  // (1 - x1 - x2)^2 expanded by hand
  const Polynomial sq = x3 * x3;
  CHECK(sq.coefficient({0, 0}) == 1.0);
  CHECK(sq.coefficient({1, 0}) == -2.0);
  CHECK(sq.coefficient({0, 1}) == -2.0);
  CHECK(sq.coefficient({2, 0}) == 1.0);
  CHECK(sq.coefficient({1, 1}) == 2.0);
  CHECK(sq.coefficient({0, 2}) == 1.0);
  CHECK(sq.terms().size() == 6);
}

TEST_CASE("arithmetic and derivatives") {
  const Polynomial x = X();
  CHECK((x * (Polynomial::constant(I, 1.0) - x)).eval({0.5}) == 0.25);
  CHECK(x.pow(2).partial(0).approx_equal(2.0 * x, 0.0));
  const Polynomial z = (Polynomial::constant(I, 1.0) - x) * (Polynomial::constant(I, 1.0) + x) - 1.0 + x.pow(2);
  CHECK(z.is_zero());
  CHECK(z.degree() <= 0);
}

TEST_CASE("exact division") {
  const Polynomial x = X();
  const Polynomial one = Polynomial::constant(I, 1.0);
  CHECK(divide_exact(x.pow(2) - x, x).approx_equal(x - 1.0, 1e-15));
  CHECK(divide_exact(x.pow(2) * (one - x), x * (one - x)).approx_equal(x, 1e-15));
  try {
    (void)divide_exact(x.pow(2) + 1.0, x);
    FAIL("expected NotDivisible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotDivisible);
  }
}

TEST_CASE("space mismatch") {
  CHECK_THROWS_AS(X() + Polynomial::coordinate(S3, 0), Error);
}

TEST_CASE("expression parser") {
  const Polynomial p = parse_polynomial("2*x^2 - (1 - x)/4 + 3", I);
  CHECK(p.eval({0.5}) == doctest::Approx(2 * 0.25 - 0.125 + 3));
  const Polynomial q = parse_polynomial("x3^2", S3);
  CHECK(q.approx_equal(Polynomial::coordinate(S3, 2).pow(2), 1e-15));
  CHECK(parse_polynomial("1.5e-1*x", I).coefficient({1}) == doctest::Approx(0.15));
  CHECK(parse_number("9/2") == 4.5);
  CHECK_THROWS_AS(parse_polynomial("x^-1", I), Error);
  CHECK_THROWS_AS(parse_polynomial("x*", I), Error);
  CHECK_THROWS_AS(parse_polynomial("y", I), Error);
  CHECK_THROWS_AS(parse_polynomial("x4", S3), Error);
  CHECK_THROWS_AS(parse_polynomial("1/x", I), Error);
}

TEST_CASE("rational intensities and roots") {
  const Polynomial x = X();
  const RationalFn r(Polynomial::constant(I, 1.0) - x, x, x);
  CHECK(r.eval({0.25}) == doctest::Approx(3.0));
  CHECK(r.eval({0.0}) == 0.0);
  CHECK(r.at_pole(std::vector<double>{0.0}));
  const RationalFn c(2.0 * x, x);
  REQUIRE(c.constant_value());
  CHECK(*c.constant_value() == doctest::Approx(2.0));

  auto roots = real_roots_in((x - 0.25) * (x - 0.75) * (x + 2.0), 0.0, 1.0);
  REQUIRE(roots.size() == 2);
  std::sort(roots.begin(), roots.end());
  CHECK(roots[0] == doctest::Approx(0.25));
  CHECK(roots[1] == doctest::Approx(0.75));
}
