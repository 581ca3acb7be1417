#pragma once

#include <span>
#include <vector>

#include "pjd/generator.hpp"

namespace pjd {

/// E[p(X_T) | X_0 = x0] = H(x0)^T e^{T G} coeffs(p), with G built on the
/// degree-N basis. Reusable across polynomials of degree <= N.
class MomentEngine {
 public:
  MomentEngine(const LevyTriplet& triplet, int N);

  const GeneratorMatrix& matrix() const noexcept { return gm_; }

  /// x0 is an ambient point of E (checked within 1e-12).
  double moment(const Polynomial& p, std::span<const double> x0, double T) const;
  /// Horizons must be ascending; equally spaced grids reuse e^{dT G}.
  std::vector<double> curve(const Polynomial& p, std::span<const double> x0, std::span<const double> horizons) const;

 private:
  GeneratorMatrix gm_;
};

double moment(const LevyTriplet& triplet, const Polynomial& p, std::span<const double> x0, double T);
std::vector<double> moment_curve(const LevyTriplet& triplet, const Polynomial& p, std::span<const double> x0,
                                 std::span<const double> horizons);

/// Throws DomainViolation when x (ambient) is not in E within tol.
void require_in_state_space(const StateSpace& space, std::span<const double> x, double tol = 1e-12);

}  // namespace pjd
