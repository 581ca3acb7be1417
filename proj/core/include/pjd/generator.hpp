#pragma once

#include <Eigen/Core>
#include <map>
#include <ostream>
#include <utility>
#include <vector>

#include "pjd/triplet.hpp"

namespace pjd {

/// Caches R_k = sum_j lambda_j p_{k,j} (as polynomials) for one triplet.
class JumpMomentCache {
 public:
  explicit JumpMomentCache(const LevyTriplet& triplet) : triplet_(&triplet) {}
  const Polynomial& get(const MultiIndex& k);

 private:
  const LevyTriplet* triplet_;
  std::map<MultiIndex, Polynomial, GradedLexLess> cache_;
};

/// G f = 1/2 tr(a D^2 f) + b . grad f + sum_{2<=|k|<=deg f} d^k f / k! R_k over
/// the free coordinates. Throws NotPolynomial or MomentUnavailable.
Polynomial apply_generator(const LevyTriplet& triplet, const Polynomial& f);
Polynomial apply_generator(const LevyTriplet& triplet, const Polynomial& f, JumpMomentCache& cache);

struct GeneratorMatrix {
  Eigen::MatrixXd G;
  std::vector<MultiIndex> basis;
  StateSpace space = StateSpace::interval();
  int N = 0;

  /// Coefficient vector of p in `basis`; throws OutOfRange if deg p > N.
  Eigen::VectorXd coefficients(const Polynomial& p) const;
  /// H(x): basis monomials evaluated at free coordinates x.
  Eigen::VectorXd monomials_at(std::span<const double> x) const;
  /// Row-major CSV, header = basis monomials.
  void write_csv(std::ostream& os) const;
};

/// Column j holds the coordinates of G h_j.
GeneratorMatrix build_matrix(const LevyTriplet& triplet, int N);

/// Name of a basis monomial, e.g. "1", "x^2", "x1*x2^3".
std::string monomial_name(const StateSpace& space, const MultiIndex& k);

/// Finite conic combination of triplets on a common space.
LevyTriplet conic_combine(const std::vector<std::pair<double, LevyTriplet>>& parts);

/// Intensities lambda_l = q_l / (gamma_l^2 prod_{j != l}(gamma_l - gamma_j)) of
/// unit atoms with jump sizes gamma_l that reproduce r = (r_2, ..., r_{L+1});
/// further entries of r are determined by these and ignored.
/// Affine factors common to numerator and denominator are cancelled; the
/// pole factor is gamma_l when it still divides the denominator. Throws
/// DegenerateGammas.
std::vector<RationalFn> finite_atom_intensities(const std::vector<Polynomial>& gammas, const std::vector<Polynomial>& r);

/// Interval triplet with diffusion a, drift b and one jump gamma_l(x) y,
/// mu = delta_1, per (lambda_l, gamma_l).
LevyTriplet finite_atom_triplet(const Polynomial& a, const Polynomial& b, const std::vector<Polynomial>& gammas,
                                const std::vector<RationalFn>& lambdas);

}  // namespace pjd
