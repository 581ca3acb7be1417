#include "pjd/spt.hpp"

#include <cmath>
#include <limits>

#include "pjd/error.hpp"
#include "pjd/typed_spec.hpp"

namespace pjd {

namespace {

void check_model(const SPTModel& m) {
  if (m.d < 2) throw Error(ErrorCode::DomainViolation, "SPT model needs d >= 2");
  if (!(m.beta >= 0.0)) throw Error(ErrorCode::DomainViolation, "beta must be >= 0");
  if (static_cast<int>(m.q.size()) != m.d || static_cast<int>(m.mu.size()) != m.d)
    throw Error(ErrorCode::DomainViolation, "SPT model needs one intensity and one measure per coordinate");
  for (int i = 0; i < m.d; ++i) {
    if (static_cast<int>(m.q[static_cast<std::size_t>(i)].size()) != m.d)
      throw Error(ErrorCode::DomainViolation, "q_" + std::to_string(i) + " needs d vertex values");
    for (double v : m.q[static_cast<std::size_t>(i)])
      if (v < 0.0) throw Error(ErrorCode::DomainViolation, "q values must be >= 0");
    const auto& mu = m.mu[static_cast<std::size_t>(i)];
    if (!mu.is_zero() && mu.dim() != m.d) throw Error(ErrorCode::DomainViolation, "mu_i must live on the simplex");
  }
}

}  // namespace

Eigen::MatrixXd spt_alpha(int d) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Ones(d, d);
  a.diagonal().setZero();
  return a;
}

Eigen::MatrixXd spt_drift(int d, double beta) {
  return Eigen::MatrixXd::Constant(d, d, (1.0 + beta) / 2.0) - d * (1.0 + beta) / 2.0 * Eigen::MatrixXd::Identity(d, d);
}

LevyTriplet spt_build(const SPTModel& m) {
  check_model(m);
  const StateSpace s = StateSpace::simplex(m.d);
  LevyTriplet t = construct(SimplexType0{spt_alpha(m.d), spt_drift(m.d, m.beta)});
  for (int i = 0; i < m.d; ++i) {
    const auto& mu = m.mu[static_cast<std::size_t>(i)];
    if (mu.is_zero()) continue;
    const Polynomial xi = Polynomial::coordinate(s, i);
    Polynomial q(s);
    for (int k = 0; k < m.d; ++k) {
      const double v = m.q[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      if (v != 0.0) q += v * Polynomial::coordinate(s, k);
    }
    if (q.is_zero()) continue;
    JumpSpec j;
    j.lambda = RationalFn(q, xi, xi);
    j.gamma = AffineJumpMap(s, m.d);
    for (int k = 0; k < m.d; ++k) j.gamma.coeff[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = xi;
    if (mu.is_atomic()) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(m.d);
      c(i) = -1.0;
      j.mu = pushforward_affine(mu, Eigen::MatrixXd::Identity(m.d, m.d), c);
    } else {
      j.mu = mu;
    }
    t.jumps.push_back(std::move(j));
  }
  return t;
}

InteriorReport spt_check_interior(const SPTModel& m) {
  check_model(m);
  InteriorReport rep;
  const double ninf = -std::numeric_limits<double>::infinity();
  auto first = [&](int i, int k) -> double {
    const auto& mu = m.mu[static_cast<std::size_t>(i)];
    if (mu.is_zero()) return 0.0;
    if (!mu.is_atomic()) {
      // tables are over z = y - e_i
      MultiIndex e(static_cast<std::size_t>(m.d), 0);
      e[static_cast<std::size_t>(k)] = 1;
      return mu.moment(e);
    }
    double s = 0.0;
    for (const auto& a : mu.atoms()) s += a.weight * a.point[static_cast<std::size_t>(k)];
    return s;
  };
  auto log_term = [&](int k) -> double {
    const auto& mu = m.mu[static_cast<std::size_t>(k)];
    if (mu.is_zero()) return 0.0;
    if (!mu.is_atomic()) return ninf;
    double s = 0.0;
    for (const auto& a : mu.atoms()) {
      const double y = a.point[static_cast<std::size_t>(k)];
      if (!(y > 0.0)) return ninf;
      s += a.weight * (1.0 + std::log(y) - y);
    }
    return s;
  };
  for (int k = 0; k < m.d; ++k) {
    const double lk = log_term(k);
    for (int j = 0; j < m.d; ++j) {
      if (j == k) continue;
      double margin = m.beta / 2.0;
      for (int i = 0; i < m.d; ++i)
        if (i != k) margin -= m.q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * first(i, k);
      const double qk = m.q[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
      if (qk != 0.0) margin += qk * lk;
      rep.margins.push_back({k, j, margin});
      if (!(margin > 0.0)) rep.ok = false;
    }
  }
  return rep;
}

}  // namespace pjd
