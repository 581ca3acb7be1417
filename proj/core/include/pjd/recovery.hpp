#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pjd/typed_spec.hpp"

namespace pjd {

enum class Payoff { Identity, Square, General };

/// Recovery rate S = p(X) with X of interval Type 2 and no-jump point 0.
struct RecoveryModel {
  IntervalType2 underlying;
  Payoff payoff = Payoff::Identity;
  Polynomial general = Polynomial::variable(StateSpace::interval(), 0);
  bool sticky = false;

  /// Whether kappa (1 - theta) = (1 + q) \int y mu(dy) holds to 1e-10.
  bool sticky_holds() const;
};

/// Builds a model and sets the sticky flag from the parameters. Throws
/// DomainViolation unless the underlying has side 0.
RecoveryModel make_recovery_model(IntervalType2 underlying, Payoff payoff = Payoff::Identity);

/// F(t,T) = E[S_T | S_t] for tau = T - t. For general payoffs x0 is the state
/// of X (required); identity and square payoffs use x0 = S and sqrt(S).
/// Throws OutOfRange.
double recovery_forward(const RecoveryModel& model, double S, double tau, std::optional<double> x0 = std::nullopt);

/// Non-defaultable zero-coupon prices P(t, t + T) at tenors T > 0, anchored
/// with P(t, t) = 1 and log-linear interpolation in between.
class DiscountCurve {
 public:
  DiscountCurve() = default;
  explicit DiscountCurve(std::vector<std::pair<double, double>> tenor_price);

  /// Throws CurveMissingTenor beyond the last tenor.
  double price(double tenor) const;
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  const std::vector<std::pair<double, double>>& points() const noexcept { return pts_; }

 private:
  std::vector<std::pair<double, double>> pts_;
  std::vector<std::string> warnings_;
};

/// P(t,T) F(t,T).
double defaultable_bond_price(const DiscountCurve& curve, const RecoveryModel& model, double S, double tenor,
                              std::optional<double> x0 = std::nullopt);

}  // namespace pjd
