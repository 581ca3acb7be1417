#pragma once

#include <Eigen/Core>
#include <optional>
#include <variant>
#include <vector>

#include "pjd/polynomial.hpp"

namespace pjd {

struct Atom {
  std::vector<double> point;
  double weight = 0.0;
};

/// Mixed moments m_k = \int y^k mu(dy). Entries of order 0 and 1 may be
/// absent, meaning infinite or unknown; entries of order >= 2 up to
/// max_degree() are required for every index.
struct MomentTable {
  int dim = 1;
  std::map<MultiIndex, double, GradedLexLess> values;

  std::optional<double> get(const MultiIndex& k) const;
  /// Largest n such that every |k| in [2, n] is present.
  int max_degree() const;
};

/// Jump-size measure mu over the integration variables y, either a finite
/// list of weighted atoms or a table of mixed moments.
class MeasureRep {
 public:
  MeasureRep() = default;
  static MeasureRep from_atoms(int dim, std::vector<Atom> atoms);
  static MeasureRep from_moments(MomentTable table);
  static MeasureRep zero(int dim) { return from_atoms(dim, {}); }

  int dim() const noexcept { return dim_; }
  bool is_atomic() const noexcept { return std::holds_alternative<std::vector<Atom>>(rep_); }
  const std::vector<Atom>& atoms() const;
  const MomentTable& table() const;

  bool is_zero() const;
  /// Total mass; nullopt when only a moment table without m_0 is given.
  std::optional<double> total_mass() const;
  /// Throws Error(MomentUnavailable) when the moment is not finite/known.
  double moment(const MultiIndex& k) const;
  std::optional<double> try_moment(const MultiIndex& k) const;

  MeasureRep scaled(double w) const;

 private:
  int dim_ = 1;
  std::variant<std::vector<Atom>, MomentTable> rep_ = std::vector<Atom>{};
};

/// Mixed moments of mu for all |k| <= upto. From atoms m_k = sum w y^k.
MomentTable measure_moments(const MeasureRep& mu, int upto);

/// Integrates the jump variables out of a joint polynomial. `joint` lives on
/// Euclidean(space.free_vars() + mu.dim()), state variables first.
Polynomial integrate_out(const Polynomial& joint, const StateSpace& space, const MeasureRep& mu);

/// Image of mu under y -> M y + c. Atoms map to atoms; a moment table maps to
/// a moment table of the same degree.
MeasureRep pushforward_affine(const MeasureRep& mu, const Eigen::MatrixXd& M, const Eigen::VectorXd& c);

}  // namespace pjd
