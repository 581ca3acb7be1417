#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "pjd/measure.hpp"
#include "pjd/polynomial.hpp"
#include "pjd/rational.hpp"

namespace pjd {

using PolyMatrix = std::vector<std::vector<Polynomial>>;

PolyMatrix zero_poly_matrix(const StateSpace& space, int n);

/// Jump size gamma(x, y), affine in the state x and affine in the jump
/// variables y:
///   gamma_i(x, y) = offset_i(x) + sum_m coeff_{i,m}(x) y_m
/// for every ambient coordinate i. All polynomials are over the free
/// coordinates of the state space.
struct AffineJumpMap {
  int ny = 1;
  std::vector<Polynomial> offset;
  PolyMatrix coeff;

  AffineJumpMap() = default;
  AffineJumpMap(const StateSpace& space, int ny);

  int coords() const noexcept { return static_cast<int>(offset.size()); }
  const StateSpace& space() const { return offset.front().space(); }

  /// Largest x-degree among the defining polynomials.
  int state_degree() const;
  bool is_affine() const { return state_degree() <= 1; }

  /// gamma_i as a polynomial over Euclidean(free_vars + ny).
  Polynomial joint(int i) const;
  /// Ambient jump vector at free-coordinate state x and jump variables y.
  std::vector<double> eval(std::span<const double> x, std::span<const double> y) const;
};

struct JumpSpec {
  RationalFn lambda;
  AffineJumpMap gamma;
  MeasureRep mu;

  /// p_k(x) = \int gamma(x,y)^k mu(dy) for k over the free output
  /// coordinates (no intensity factor).
  Polynomial jump_moment(const MultiIndex& k) const;
};

/// Extra diffusion a^nu(x) added on the zero set of `zero_set` (the
/// "no-jump" point or hyperplane of a pole of order two).
struct PoleCorrection {
  Polynomial zero_set;
  PolyMatrix matrix;

  bool active_at(std::span<const double> x, double eps = 1e-8) const;
};

/// Levy triplet (a, b, nu) of a polynomial jump-diffusion. `a` and `b` are
/// indexed by ambient coordinates (1 on the interval, d on the simplex),
/// with entries over the free coordinates.
struct LevyTriplet {
  StateSpace space = StateSpace::interval();
  PolyMatrix a;
  std::vector<PoleCorrection> poles;
  std::vector<Polynomial> b;
  std::vector<JumpSpec> jumps;

  LevyTriplet() = default;
  explicit LevyTriplet(StateSpace s);

  int coords() const noexcept { return space.coords(); }

  /// a(x) including active pole corrections, ambient dimension.
  Eigen::MatrixXd diffusion_at(std::span<const double> x_free) const;
  Eigen::VectorXd drift_at(std::span<const double> x_free) const;
  /// True when every jump has a zero measure or there are no jumps.
  bool has_jumps() const;
};

/// Free coordinates of an ambient point (drops x_d on the simplex).
std::vector<double> free_coordinates(const StateSpace& space, std::span<const double> point);
/// Ambient point from free coordinates.
std::vector<double> ambient_point(const StateSpace& space, std::span<const double> x_free);

}  // namespace pjd
