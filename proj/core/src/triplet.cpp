#include "pjd/triplet.hpp"

#include <cmath>

#include "pjd/error.hpp"

namespace pjd {

PolyMatrix zero_poly_matrix(const StateSpace& space, int n) {
  return PolyMatrix(static_cast<std::size_t>(n), std::vector<Polynomial>(static_cast<std::size_t>(n), Polynomial(space)));
}

AffineJumpMap::AffineJumpMap(const StateSpace& space, int ny_)
    : ny(ny_),
      offset(static_cast<std::size_t>(space.coords()), Polynomial(space)),
      coeff(static_cast<std::size_t>(space.coords()),
            std::vector<Polynomial>(static_cast<std::size_t>(ny_), Polynomial(space))) {}

int AffineJumpMap::state_degree() const {
  int deg = 0;
  for (const auto& p : offset) deg = std::max(deg, p.degree());
  for (const auto& row : coeff)
    for (const auto& p : row) deg = std::max(deg, p.degree());
  return deg;
}

Polynomial AffineJumpMap::joint(int i) const {
  const StateSpace& s = space();
  const int nx = s.free_vars();
  const StateSpace js = StateSpace::euclidean(nx + ny);
  const StateSpace xs = StateSpace::euclidean(nx);
  auto as_x = [&](const Polynomial& p) {
    Polynomial q(xs);
    for (const auto& [k, c] : p.terms()) q.add_term(k, c);
    return embed(q, js, 0);
  };
  Polynomial out = as_x(offset[static_cast<std::size_t>(i)]);
  for (int m = 0; m < ny; ++m) {
    const auto& c = coeff[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
    if (c.is_zero()) continue;
    out += as_x(c) * Polynomial::variable(js, nx + m);
  }
  return out;
}

std::vector<double> AffineJumpMap::eval(std::span<const double> x, std::span<const double> y) const {
  std::vector<double> out(offset.size(), 0.0);
  for (std::size_t i = 0; i < offset.size(); ++i) {
    double v = offset[i].eval(x);
    for (int m = 0; m < ny; ++m) {
      const auto& c = coeff[i][static_cast<std::size_t>(m)];
      if (!c.is_zero()) v += c.eval(x) * y[static_cast<std::size_t>(m)];
    }
    out[i] = v;
  }
  return out;
}

Polynomial JumpSpec::jump_moment(const MultiIndex& k) const {
  const StateSpace& s = lambda.space();
  const int nx = s.free_vars();
  const StateSpace js = StateSpace::euclidean(nx + gamma.ny);
  Polynomial prod = Polynomial::constant(js, 1.0);
  for (int i = 0; i < nx; ++i) {
    const int e = k[static_cast<std::size_t>(i)];
    if (e > 0) prod *= gamma.joint(i).pow(e);
  }
  return integrate_out(prod, s, mu);
}

bool PoleCorrection::active_at(std::span<const double> x, double eps) const {
  return std::abs(zero_set.eval(x)) < eps;
}

LevyTriplet::LevyTriplet(StateSpace s)
    : space(s), a(zero_poly_matrix(s, s.coords())), b(static_cast<std::size_t>(s.coords()), Polynomial(s)) {}

Eigen::MatrixXd LevyTriplet::diffusion_at(std::span<const double> x) const {
  const int n = coords();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(x);
  for (const auto& pc : poles) {
    if (!pc.active_at(x)) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) += pc.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(x);
  }
  return m;
}

Eigen::VectorXd LevyTriplet::drift_at(std::span<const double> x) const {
  Eigen::VectorXd v(coords());
  for (int i = 0; i < coords(); ++i) v(i) = b[static_cast<std::size_t>(i)].eval(x);
  return v;
}

bool LevyTriplet::has_jumps() const {
  for (const auto& j : jumps)
    if (!j.mu.is_zero() && !j.lambda.num.is_zero()) return true;
  return false;
}

std::vector<double> free_coordinates(const StateSpace& space, std::span<const double> point) {
  if (static_cast<int>(point.size()) != space.coords())
    throw Error(ErrorCode::SpaceMismatch, "point has " + std::to_string(point.size()) + " coordinates, " +
                                              space.name() + " needs " + std::to_string(space.coords()));
  return std::vector<double>(point.begin(), point.begin() + space.free_vars());
}

std::vector<double> ambient_point(const StateSpace& space, std::span<const double> x) {
  std::vector<double> out(x.begin(), x.begin() + space.free_vars());
  if (space.is_simplex()) {
    double s = 0.0;
    for (double v : out) s += v;
    out.push_back(1.0 - s);
  }
  return out;
}

}  // namespace pjd
