#include "pjd/moments.hpp"

#include <cmath>

#include "pjd/error.hpp"
#include "pjd/expm.hpp"

namespace pjd {

void require_in_state_space(const StateSpace& space, std::span<const double> x, double tol) {
  if (static_cast<int>(x.size()) != space.coords())
    throw Error(ErrorCode::SpaceMismatch, space.name() + " needs " + std::to_string(space.coords()) + " coordinates");
  double sum = 0.0;
  for (double v : x) {
    if (!std::isfinite(v) || v < -tol || (space.is_interval() && v > 1.0 + tol))
      throw Error(ErrorCode::DomainViolation, "state point outside " + space.name());
    sum += v;
  }
  if (space.is_simplex() && std::abs(sum - 1.0) > tol)
    throw Error(ErrorCode::DomainViolation, "simplex coordinates must sum to 1");
}

MomentEngine::MomentEngine(const LevyTriplet& triplet, int N) : gm_(build_matrix(triplet, N)) {}

double MomentEngine::moment(const Polynomial& p, std::span<const double> x0, double T) const {
  const double h[] = {T};
  return curve(p, x0, h).front();
}

std::vector<double> MomentEngine::curve(const Polynomial& p, std::span<const double> x0,
                                        std::span<const double> horizons) const {
  require_in_state_space(gm_.space, x0);
  const Eigen::VectorXd coeffs = gm_.coefficients(p);
  const auto xf = free_coordinates(gm_.space, x0);
  const Eigen::VectorXd H = gm_.monomials_at(xf);
  std::vector<double> out;
  out.reserve(horizons.size());
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (!(horizons[i] >= 0.0)) throw Error(ErrorCode::OutOfRange, "horizons must be >= 0");
    if (i > 0 && horizons[i] < horizons[i - 1]) throw Error(ErrorCode::OutOfRange, "horizons must be ascending");
  }
  bool uniform = horizons.size() > 2;
  const double step = horizons.size() > 1 ? horizons[1] - horizons[0] : 0.0;
  for (std::size_t i = 1; uniform && i < horizons.size(); ++i)
    if (std::abs(horizons[i] - horizons[i - 1] - step) > 1e-12 * std::max(1.0, horizons.back())) uniform = false;
  if (uniform) {
    const Eigen::MatrixXd E = expm(step * gm_.G);
    Eigen::VectorXd v = expm(horizons[0] * gm_.G) * coeffs;
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      if (i > 0) v = E * v;
      out.push_back(H.dot(v));
    }
    return out;
  }
  for (double T : horizons) out.push_back(H.dot(expm(T * gm_.G) * coeffs));
  return out;
}

double moment(const LevyTriplet& triplet, const Polynomial& p, std::span<const double> x0, double T) {
  return MomentEngine(triplet, p.degree()).moment(p, x0, T);
}

std::vector<double> moment_curve(const LevyTriplet& triplet, const Polynomial& p, std::span<const double> x0,
                                 std::span<const double> horizons) {
  return MomentEngine(triplet, p.degree()).curve(p, x0, horizons);
}

}  // namespace pjd
