#pragma once

#include <Eigen/Core>
#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "pjd/measure.hpp"
#include "pjd/triplet.hpp"
#include "pjd/validate.hpp"

namespace pjd {

// Canonical parameterizations of polynomial jump-diffusions with affine jump
// sizes. Interval types have a(x) = A x(1-x) and b(x) = kappa (theta - x).

/// Jacobi diffusion, no jumps.
struct IntervalType0 {
  double A = 0.0, kappa = 0.0, theta = 0.0;
};

/// lambda = 1, gamma(x,y) = y1 (-x) + y2 (1-x), mu on [0,1]^2 \ {0}.
struct IntervalType1 {
  double A = 0.0, kappa = 0.0, theta = 0.0;
  MeasureRep mu = MeasureRep::zero(2);
};

/// side 0: lambda = (1 + q x)/x, gamma = -x y.
/// side 1: lambda = (1 + q (1-x))/(1-x), gamma = (1-x) y.
/// mu on (0,1], q >= -1.
struct IntervalType2 {
  double A = 0.0, kappa = 0.0, theta = 0.0, q = 0.0;
  int side = 0;
  MeasureRep mu = MeasureRep::zero(1);
};

/// lambda = (q0 + q1 x + q2 x^2)/(x - x*)^2, gamma = -(x - x*) y, with a pole
/// correction a^nu = (q0 + q1 x* + q2 x*^2) \int y^2 mu(dy) at x*.
struct IntervalType3 {
  double x_star = 0.5, kappa = 0.0, theta = 0.0, A = 0.0, q0 = 0.0, q1 = 0.0, q2 = 0.0;
  MeasureRep mu = MeasureRep::zero(1);
};

/// Data tag only: no example is known, construction and simulation refuse it.
struct IntervalType4 {
  std::complex<double> alpha{0.5, 0.1};
  double kappa = 0.0, theta = 0.0, A = 0.0, L = 0.0;
  MeasureRep mu = MeasureRep::zero(2);
};

/// a_ii = sum_{j != i} alpha_ij x_i x_j, a_ij = -alpha_ij x_i x_j, b = B x.
struct SimplexType0 {
  Eigen::MatrixXd alpha;
  Eigen::MatrixXd B;
};

/// lambda = 1, gamma = sum_i (y^i - e_i) x_i with y = (y^1..y^d), y^i in the
/// simplex. Atoms are given as the concatenation (y^1, ..., y^d); moment
/// tables are over the displacements z^i = y^i - e_i.
struct SimplexType1 {
  Eigen::MatrixXd alpha;
  Eigen::MatrixXd B;
  MeasureRep mu;
};

/// lambda = q1(x)/x_i, gamma = (y - e_i) x_i. q1 holds q1(e_j) for every j.
/// Atoms are points y of the simplex; moment tables are over z = y - e_i.
struct SimplexType2 {
  int i = 0;
  Eigen::MatrixXd alpha;
  Eigen::MatrixXd B;
  std::vector<double> q1;
  MeasureRep mu;
};

/// lambda = q2(x)/(x_j - c x_i)^2 with q2(x) = sum_k (qi_k x_i x_k + qj_k x_j x_k),
/// gamma = y (x_j - c x_i)(e_i - e_j), a = a^c + q2(x) \int y^2 mu A^nu on the
/// no-jump hyperplane {c x_i = x_j}.
struct SimplexType3 {
  int i = 0, j = 1;
  double c = 1.0;
  Eigen::MatrixXd B;
  Eigen::MatrixXd alpha;
  std::vector<double> qi;
  std::vector<double> qj;
  MeasureRep mu = MeasureRep::zero(1);
};

using TypedSpec = std::variant<IntervalType0, IntervalType1, IntervalType2, IntervalType3, IntervalType4,
                               SimplexType0, SimplexType1, SimplexType2, SimplexType3>;

/// "interval-type-0" ... "simplex-type-3".
std::string type_name(const TypedSpec& spec);
StateSpace state_space_of(const TypedSpec& spec);

/// Parameter-domain and boundary-inequality checks of a typed spec. Boundary
/// inequalities use an absolute slack of 1e-10.
ValidationReport check_domain(const TypedSpec& spec, int grid_n = 200);

/// Emits the Levy triplet the type prescribes. Throws DomainViolation,
/// BoundaryViolation, or Type4Unsupported.
LevyTriplet construct(const TypedSpec& spec);

/// Removes the scaling freedom between intensity and measure (and the index
/// orientation of simplex Type 3) so that equivalent specs compare equal.
TypedSpec canonicalize(const TypedSpec& spec);

/// Parameter-wise comparison, measures compared atom-by-atom (sorted) or
/// entry-by-entry, relative to max(1, |value|).
bool approx_equal(const TypedSpec& a, const TypedSpec& b, double tol);

/// Type 0 diffusion matrix on the simplex for the given alpha.
PolyMatrix simplex_type0_diffusion(const StateSpace& space, const Eigen::MatrixXd& alpha);

}  // namespace pjd
