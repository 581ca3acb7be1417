#include <doctest.h>

#include "pjd/typed_spec.hpp"
#include "pjd/validate.hpp"

using namespace pjd;

TEST_CASE("simplex drift must conserve mass") {
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Ones(3, 3);
  alpha.diagonal().setZero();
  Eigen::MatrixXd B = Eigen::MatrixXd::Constant(3, 3, 0.5);
  B.diagonal().setConstant(-1.0);
  LevyTriplet t = construct(SimplexType0{alpha, B});
  CHECK(validate(t).ok());
  t.b[0] += Polynomial::coordinate(t.space, 0);
  const ValidationReport r = validate(t);
  CHECK(r.has("drift-conservation"));
}

TEST_CASE("interval diffusion must vanish at the boundary") {
  const StateSpace I = StateSpace::interval();
  LevyTriplet t(I);
  t.a[0][0] = Polynomial::variable(I, 0).pow(2);
  t.b[0] = Polynomial::constant(I, 0.5) - Polynomial::variable(I, 0);
  const ValidationReport r = validate(t);
  CHECK_FALSE(r.ok());
  CHECK(r.has("a-boundary"));
}

TEST_CASE("interval drift must point inward") {
  const StateSpace I = StateSpace::interval();
  LevyTriplet t = construct(IntervalType0{0.2, 1.0, 0.5});
  t.b[0] = Polynomial::constant(I, -0.1) + 0.0 * Polynomial::variable(I, 0);
  CHECK_FALSE(validate(t).ok());
}

TEST_CASE("non-polynomial jump moments are reported") {
  // a lone Type-2-like kernel 1/(x(x+1)) with gamma = -x is not polynomial
  const StateSpace I = StateSpace::interval();
  const Polynomial x = Polynomial::variable(I, 0);
  LevyTriplet t(I);
  t.b[0] = Polynomial::constant(I, 0.5) - x;
  JumpSpec j;
  j.lambda = RationalFn(Polynomial::constant(I, 1.0), x * (x + 1.0), x);
  j.gamma = AffineJumpMap(I, 1);
  j.gamma.coeff[0][0] = -1.0 * x;
  j.mu = MeasureRep::from_atoms(1, {{{1.0}, 1.0}});
  t.jumps.push_back(j);
  CHECK_FALSE(validate(t).ok());
}

TEST_CASE("grids") {
  CHECK(state_grid(StateSpace::interval(), 11).size() == 11);
  const auto g = state_grid(StateSpace::simplex(3), 5);
  CHECK(g.size() == 15);  // compositions of 4 into 3 parts
  for (const auto& p : g) CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0));
}
