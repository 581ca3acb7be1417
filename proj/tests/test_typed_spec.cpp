#include <doctest.h>

#include "pjd/error.hpp"
#include "pjd/generator.hpp"
#include "pjd/typed_spec.hpp"
#include "pjd/validate.hpp"

using namespace pjd;

namespace {

const StateSpace I = StateSpace::interval();
Polynomial X() { return Polynomial::variable(I, 0); }

Eigen::MatrixXd ones_offdiag(int d) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Ones(d, d);
  a.diagonal().setZero();
  return a;
}

Eigen::MatrixXd mixing(int d, double r) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Constant(d, d, r);
  B.diagonal().setConstant(-r * (d - 1));
  return B;
}

ErrorCode code_of(const TypedSpec& s) {
  try {
    (void)construct(s);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("construct did not throw");
  return ErrorCode::Parse;
}

}  // namespace

TEST_CASE("type 0 triplet") {
  const LevyTriplet t = construct(IntervalType0{0.2, 1.0, 0.5});
  const Polynomial x = X();
  CHECK(t.a[0][0].approx_equal(0.2 * x - 0.2 * x.pow(2), 1e-15));
  CHECK(t.b[0].approx_equal(Polynomial::constant(I, 0.5) - x, 1e-15));
  CHECK(t.jumps.empty());
  CHECK(validate(t).ok());
}

TEST_CASE("type 1 reflection") {
  // sigma^2 = 0.2, kappa0 = 1, theta0 = 0.5, jump rate 0.5
  const double lam = 0.5, k0 = 1.0, th0 = 0.5;
  IntervalType1 s{0.2, k0 + 2 * lam, (k0 * th0 + lam) / (k0 + 2 * lam), MeasureRep::from_atoms(2, {{{1.0, 1.0}, lam}})};
  const LevyTriplet t = construct(s);
  REQUIRE(t.jumps.size() == 1);
  for (double x : {0.0, 0.3, 0.9}) {
    const auto g = t.jumps[0].gamma.eval(std::vector<double>{x}, std::vector<double>{1.0, 1.0});
    CHECK(g[0] == doctest::Approx(1.0 - 2.0 * x));
    CHECK(t.jumps[0].lambda.eval({x}) == doctest::Approx(1.0));
  }
  CHECK(validate(t).ok());
}

TEST_CASE("domain and boundary failures") {
  CHECK(code_of(IntervalType0{0.2, 1.0, 1.5}) == ErrorCode::DomainViolation);
  CHECK(code_of(IntervalType0{-0.2, 1.0, 0.5}) == ErrorCode::DomainViolation);
  // kappa theta < \int y2 mu
  CHECK(code_of(IntervalType1{0.2, 1.0, 0.1, MeasureRep::from_atoms(2, {{{0.0, 0.5}, 1.0}})}) ==
        ErrorCode::BoundaryViolation);
  CHECK(code_of(IntervalType2{0.2, 1.0, 0.5, -2.0, 0, MeasureRep::from_atoms(1, {{{0.5}, 1.0}})}) ==
        ErrorCode::DomainViolation);
  CHECK(code_of(IntervalType4{}) == ErrorCode::Type4Unsupported);
  SimplexType0 bad{ones_offdiag(3), mixing(3, 1.0)};
  bad.B(0, 1) = -0.5;
  bad.B(1, 1) += 1.5;
  CHECK(code_of(bad) == ErrorCode::DomainViolation);
}

TEST_CASE("check_domain names the violated condition") {
  CHECK(check_domain(IntervalType0{0.2, 1.0, 1.5}).has("theta-domain"));
  CHECK(check_domain(IntervalType0{0.2, 1.0, 0.5}).ok());
}

TEST_CASE("typed builds validate") {
  const std::vector<TypedSpec> specs = {
      IntervalType2{0.3, 1.0, 0.6, 0.0, 0, MeasureRep::from_atoms(1, {{{0.4}, 1.0}})},
      IntervalType2{0.5, 1.0, 0.8, 2.0, 1, MeasureRep::from_atoms(1, {{{0.25}, 0.5}, {{1.0}, 0.1}})},
      IntervalType3{1.0 / 3, 0.5, 0.5, 0.4, 0.0, 1.0, -1.0, MeasureRep::from_atoms(1, {{{0.5}, 1.0}})},
      SimplexType0{ones_offdiag(3), mixing(3, 0.5)},
      SimplexType1{ones_offdiag(3), mixing(3, 0.5),
                   MeasureRep::from_atoms(9, {{{0.8, 0.1, 0.1, 0.1, 0.8, 0.1, 0.1, 0.1, 0.8}, 0.5}})},
      SimplexType2{0, ones_offdiag(3), mixing(3, 0.5), {0.5, 1.0, 1.0}, MeasureRep::from_atoms(3, {{{0.2, 0.4, 0.4}, 1.0}})},
      SimplexType3{0, 1, 1.0, mixing(3, 0.5), ones_offdiag(3), {0.5, 0.5, 0.5}, {0.5, 0.5, 0.5},
                   MeasureRep::from_atoms(1, {{{0.5}, 1.0}})},
  };
  for (const auto& s : specs) {
    CAPTURE(type_name(s));
    const LevyTriplet t = construct(s);
    const ValidationReport r = validate(t);
    for (const auto& v : r.violations) MESSAGE(v.condition << " " << v.location);
    CHECK(r.ok());
    CHECK(apply_generator(t, Polynomial::constant(t.space, 1.0)).is_zero());
  }
}

TEST_CASE("type 3 no-jump diffusion") {
  const IntervalType3 s{0.5, 1.0, 0.5, 0.4, 0.0, 1.0, -1.0, MeasureRep::from_atoms(1, {{{1.0}, 2.0}})};
  const LevyTriplet t = construct(s);
  // a^nu = (q0 + q1 x* + q2 x*^2) \int y^2 mu = 0.25 * 2
  const double base = 0.4 * 0.25;
  CHECK(t.diffusion_at(std::vector<double>{0.5})(0, 0) == doctest::Approx(base + 0.5));
  CHECK(t.diffusion_at(std::vector<double>{0.5 + 1e-6})(0, 0) == doctest::Approx(0.4 * (0.5 + 1e-6) * (0.5 - 1e-6)));
}

TEST_CASE("canonical form is invariant under rescaling") {
  const IntervalType3 a{0.4, 0.5, 0.5, 0.3, 0.0, 1.0, -1.0, MeasureRep::from_atoms(1, {{{1.0}, 1.0}})};
  IntervalType3 b = a;
  b.q1 *= 2;
  b.q2 *= 2;
  b.mu = b.mu.scaled(0.5);
  CHECK(approx_equal(canonicalize(a), canonicalize(b), 1e-12));
  CHECK_FALSE(approx_equal(a, b, 1e-12));
}
