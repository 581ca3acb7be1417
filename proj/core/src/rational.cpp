#include "pjd/rational.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "pjd/error.hpp"

namespace pjd {

RationalFn::RationalFn(Polynomial n, Polynomial d, std::optional<Polynomial> pole)
    : num(std::move(n)), den(std::move(d)), pole_factor(std::move(pole)) {
  if (!(num.space() == den.space())) throw Error(ErrorCode::SpaceMismatch, "intensity num/den spaces differ");
  if (den.is_zero()) throw Error(ErrorCode::DomainViolation, "intensity denominator is identically zero");
}

RationalFn RationalFn::constant(StateSpace space, double c) {
  return RationalFn(Polynomial::constant(space, c), Polynomial::constant(space, 1.0));
}

bool RationalFn::at_pole(std::span<const double> x) const {
  return std::abs(den.eval(x)) <= 1e-14 * den.max_abs_coefficient();
}

double RationalFn::eval(std::span<const double> x) const {
  if (at_pole(x)) return 0.0;
  return num.eval(x) / den.eval(x);
}

std::optional<double> RationalFn::constant_value() const {
  if (num.is_zero()) return 0.0;
  try {
    Polynomial q = divide_exact(num, den, 1e-9);
    if (q.degree() == 0) return q.is_zero() ? 0.0 : q.terms().begin()->second;
  } catch (const Error&) {
  }
  return std::nullopt;
}

RationalFn RationalFn::scaled(double w) const {
  RationalFn out = *this;
  out.num *= w;
  return out;
}

std::vector<double> real_roots_in(const Polynomial& p, double lo, double hi) {
  if (p.nvars() != 1) throw Error(ErrorCode::SpaceMismatch, "real_roots_in expects a univariate polynomial");
  const int n = p.degree();
  std::vector<double> roots;
  if (n == 0) return roots;
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  for (const auto& [k, v] : p.terms()) c[static_cast<std::size_t>(k[0])] = v;
  const double lead = c[static_cast<std::size_t>(n)];
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[static_cast<std::size_t>(i)] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  constexpr double snap = 1e-8;
  for (int i = 0; i < n; ++i) {
    const auto z = es.eigenvalues()[i];
    double r = z.real();
    // clustered eigenvalues of a multiple root scatter by ~eps^(1/m)
    const bool near_real = std::abs(z.imag()) <= snap ||
                           (std::abs(z.imag()) <= 1e-4 && std::abs(p.eval({r})) <= 1e-12 * p.max_abs_coefficient());
    if (!near_real) continue;
    if (r < lo - snap || r > hi + snap) continue;
    r = std::clamp(r, lo, hi);
    roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(), [](double a, double b) { return std::abs(a - b) <= 1e-7; }),
              roots.end());
  return roots;
}

}  // namespace pjd
