#pragma once

#include <string>
#include <vector>

#include "pjd/triplet.hpp"

namespace pjd {

struct Violation {
  std::string condition;  // e.g. "drift-conservation", "a-boundary"
  std::string location;   // state point or symbol
  double magnitude = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  bool ok() const noexcept { return violations.empty(); }
  void add(std::string condition, std::string location, double magnitude);
  void warn(std::string message) { warnings.push_back(std::move(message)); }
  void merge(const ValidationReport& other);
  bool has(const std::string& condition) const;
};

/// Checks a triplet against the characterization of polynomial operators
/// with well-posed martingale problems: nonnegativity/PSD on a grid with
/// `grid_n` points per dimension, boundary diffusion and drift inflow,
/// conservation on the simplex, and polynomial jump moments.
ValidationReport validate(const LevyTriplet& triplet, int grid_n = 200);

/// Grid over E: the interval grid has grid_n points including both ends;
/// the simplex grid is the lattice with spacing 1/m capped at ~max_points.
std::vector<std::vector<double>> state_grid(const StateSpace& space, int grid_n, std::size_t max_points = 20000);

/// Affine polynomial defining the pole region of a jump intensity, when known
/// or recoverable (univariate roots on the interval).
std::vector<std::vector<double>> pole_points(const RationalFn& lambda, int samples = 9);

/// Rational function sum_j lambda_j(x) p_{k,j}(x), reduced to a polynomial by
/// exact division. Throws Error(NotPolynomial) when it is not a polynomial.
Polynomial integrated_jump_moment(const LevyTriplet& triplet, const MultiIndex& k);

/// Actual value of sum_j lambda_j(x) p_{k,j}(x) honoring the pole convention.
double jump_moment_at(const LevyTriplet& triplet, const MultiIndex& k, std::span<const double> x_free);

}  // namespace pjd
