#include "pjd/recovery.hpp"

#include <algorithm>
#include <cmath>

#include "pjd/error.hpp"
#include "pjd/moments.hpp"

namespace pjd {

namespace {

// (e^{a tau} - 1) / a, continuous at a = 0
double phi(double a, double tau) {
  if (std::abs(a * tau) < 1e-12) return tau;
  return std::expm1(a * tau) / a;
}

}  // namespace

bool RecoveryModel::sticky_holds() const {
  const auto& u = underlying;
  const auto m1 = u.mu.try_moment({1});
  if (!m1) return u.q == -1.0 && u.kappa * (1.0 - u.theta) == 0.0;
  return std::abs(u.kappa * (1.0 - u.theta) - (1.0 + u.q) * *m1) <= 1e-10;
}

RecoveryModel make_recovery_model(IntervalType2 underlying, Payoff payoff) {
  if (underlying.side != 0) throw Error(ErrorCode::DomainViolation, "recovery underlying needs the no-jump point 0");
  RecoveryModel m;
  m.underlying = std::move(underlying);
  m.payoff = payoff;
  m.sticky = m.sticky_holds();
  return m;
}

double recovery_forward(const RecoveryModel& model, double S, double tau, std::optional<double> x0) {
  if (!(S >= 0.0 && S <= 1.0)) throw Error(ErrorCode::OutOfRange, "recovery level must lie in [0,1]");
  if (!(tau >= 0.0)) throw Error(ErrorCode::OutOfRange, "tau must be >= 0");
  if (tau == 0.0) return S;
  const auto& u = model.underlying;
  const double decay = std::exp(-tau * u.kappa);
  switch (model.payoff) {
    case Payoff::Identity:
      return (1.0 - decay) * u.theta + decay * S;
    case Payoff::Square: {
      const double m2 = u.mu.moment({2});
      const double G1 = u.A + 2.0 * u.kappa * u.theta + m2;
      const double G2 = -u.A - 2.0 * u.kappa + u.q * m2;
      const double root = std::sqrt(S);
      return std::exp(tau * G2) * S + G1 * u.theta * phi(G2, tau) + G1 * (root - u.theta) * decay * phi(u.kappa + G2, tau);
    }
    case Payoff::General:
      break;
  }
  if (!x0) throw Error(ErrorCode::OutOfRange, "a general payoff needs the state x0 of the underlying");
  const double x[] = {*x0};
  return moment(construct(u), model.general, x, tau);
}

DiscountCurve::DiscountCurve(std::vector<std::pair<double, double>> tenor_price) : pts_(std::move(tenor_price)) {
  std::sort(pts_.begin(), pts_.end());
  double prev_t = 0.0, prev_p = 1.0;
  for (const auto& [t, p] : pts_) {
    if (!(t > 0.0)) throw Error(ErrorCode::OutOfRange, "curve tenors must be > 0");
    if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::OutOfRange, "curve prices must lie in (0,1]");
    if (t == prev_t) throw Error(ErrorCode::OutOfRange, "duplicate curve tenor");
    if (p > prev_p) warnings_.push_back("curve increases between tenors " + std::to_string(prev_t) + " and " + std::to_string(t));
    prev_t = t;
    prev_p = p;
  }
}

double DiscountCurve::price(double tenor) const {
  if (!(tenor >= 0.0)) throw Error(ErrorCode::OutOfRange, "tenor must be >= 0");
  if (tenor == 0.0) return 1.0;
  double t0 = 0.0, p0 = 1.0;
  for (const auto& [t, p] : pts_) {
    if (std::abs(t - tenor) <= 1e-12 * std::max(1.0, t)) return p;
    if (tenor < t) {
      const double w = (tenor - t0) / (t - t0);
      return std::exp((1.0 - w) * std::log(p0) + w * std::log(p));
    }
    t0 = t;
    p0 = p;
  }
  throw Error(ErrorCode::CurveMissingTenor, "no curve point at or beyond tenor " + std::to_string(tenor));
}

double defaultable_bond_price(const DiscountCurve& curve, const RecoveryModel& model, double S, double tenor,
                              std::optional<double> x0) {
  return curve.price(tenor) * recovery_forward(model, S, tenor, x0);
}

}  // namespace pjd
