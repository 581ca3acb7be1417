#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pjd/polynomial.hpp"

namespace pjd {

/// Jump intensity lambda = num / den on a state space. At points where the
/// denominator vanishes the intensity is defined as 0 (the "no-jump" pole
/// convention). `pole_factor`, when set, is an affine polynomial whose zero
/// set is the pole set inside E; it is used to place consistency checks on
/// the pole set of the simplex.
struct RationalFn {
  Polynomial num;
  Polynomial den;
  std::optional<Polynomial> pole_factor;

  RationalFn() = default;
  RationalFn(Polynomial n, Polynomial d, std::optional<Polynomial> pole = std::nullopt);

  static RationalFn constant(StateSpace space, double c);

  const StateSpace& space() const noexcept { return num.space(); }

  /// True when |den(x)| is at the level of rounding relative to den's scale.
  bool at_pole(std::span<const double> x) const;
  double eval(std::span<const double> x) const;
  double eval(std::initializer_list<double> x) const {
    return eval(std::span<const double>(x.begin(), x.size()));
  }

  /// Returns c when num = c * den exactly (within 1e-9), else nullopt.
  std::optional<double> constant_value() const;

  RationalFn scaled(double w) const;
};

/// Real roots of a univariate polynomial in [lo, hi] via the companion
/// matrix; roots with |Im| <= 1e-8 count as real and are snapped into the
/// interval when within 1e-8 of it.
std::vector<double> real_roots_in(const Polynomial& p, double lo, double hi);

}  // namespace pjd
