#include "pjd/measure.hpp"

#include <cmath>

#include "pjd/error.hpp"

namespace pjd {

std::optional<double> MomentTable::get(const MultiIndex& k) const {
  auto it = values.find(k);
  if (it == values.end() || !std::isfinite(it->second)) return std::nullopt;
  return it->second;
}

int MomentTable::max_degree() const {
  int n = 1;
  for (;; ++n) {
    for (const auto& k : enumerate_indices(dim, n + 1)) {
      if (total_degree(k) != n + 1) continue;
      if (!get(k)) return n;
    }
    if (n > 64) return n;
  }
}

MeasureRep MeasureRep::from_atoms(int dim, std::vector<Atom> atoms) {
  for (const auto& a : atoms) {
    if (static_cast<int>(a.point.size()) != dim)
      throw Error(ErrorCode::DomainViolation, "atom dimension does not match measure dimension");
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw Error(ErrorCode::DomainViolation, "atom weights must be positive and finite");
  }
  MeasureRep m;
  m.dim_ = dim;
  m.rep_ = std::move(atoms);
  return m;
}

MeasureRep MeasureRep::from_moments(MomentTable table) {
  for (const auto& [k, v] : table.values) {
    if (static_cast<int>(k.size()) != table.dim)
      throw Error(ErrorCode::DomainViolation, "moment index dimension does not match table dimension");
    if (total_degree(k) >= 2 && !std::isfinite(v))
      throw Error(ErrorCode::DomainViolation, "moments of order >= 2 must be finite");
  }
  MeasureRep m;
  m.dim_ = table.dim;
  m.rep_ = std::move(table);
  return m;
}

const std::vector<Atom>& MeasureRep::atoms() const {
  if (!is_atomic()) throw Error(ErrorCode::UnsupportedForSimulation, "measure is given by moments, not atoms");
  return std::get<std::vector<Atom>>(rep_);
}

const MomentTable& MeasureRep::table() const {
  if (is_atomic()) throw Error(ErrorCode::MomentUnavailable, "measure is atomic");
  return std::get<MomentTable>(rep_);
}

bool MeasureRep::is_zero() const {
  if (is_atomic()) return atoms().empty();
  const auto& t = table();
  for (const auto& [k, v] : t.values)
    if (v != 0.0) return false;
  return true;
}

std::optional<double> MeasureRep::total_mass() const {
  return try_moment(MultiIndex(static_cast<std::size_t>(dim_), 0));
}

std::optional<double> MeasureRep::try_moment(const MultiIndex& k) const {
  if (is_atomic()) {
    double s = 0.0;
    for (const auto& a : atoms()) {
      double term = a.weight;
      for (int i = 0; i < dim_; ++i) term *= std::pow(a.point[static_cast<std::size_t>(i)], k[static_cast<std::size_t>(i)]);
      s += term;
    }
    return s;
  }
  return table().get(k);
}

double MeasureRep::moment(const MultiIndex& k) const {
  auto m = try_moment(k);
  if (!m) {
    std::string s = "(";
    for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
    throw Error(ErrorCode::MomentUnavailable, "moment " + s + ") is not available");
  }
  return *m;
}

MeasureRep MeasureRep::scaled(double w) const {
  if (w < 0.0) throw Error(ErrorCode::DomainViolation, "negative measure scale");
  if (is_atomic()) {
    if (w == 0.0) return zero(dim_);
    auto atoms_copy = atoms();
    for (auto& a : atoms_copy) a.weight *= w;
    return from_atoms(dim_, std::move(atoms_copy));
  }
  MomentTable t = table();
  for (auto& [k, v] : t.values) v *= w;
  return from_moments(std::move(t));
}

MomentTable measure_moments(const MeasureRep& mu, int upto) {
  MomentTable out;
  out.dim = mu.dim();
  for (const auto& k : enumerate_indices(mu.dim(), upto)) {
    if (total_degree(k) >= 2) {
      out.values[k] = mu.moment(k);
    } else if (auto m = mu.try_moment(k)) {
      out.values[k] = *m;
    }
  }
  return out;
}

Polynomial integrate_out(const Polynomial& joint, const StateSpace& space, const MeasureRep& mu) {
  const int nx = space.free_vars();
  if (joint.nvars() != nx + mu.dim())
    throw Error(ErrorCode::SpaceMismatch, "integrate_out: joint polynomial has wrong variable count");
  Polynomial out(space);
  MultiIndex kx(static_cast<std::size_t>(nx), 0);
  MultiIndex ky(static_cast<std::size_t>(mu.dim()), 0);
  for (const auto& [k, c] : joint.terms()) {
    std::copy(k.begin(), k.begin() + nx, kx.begin());
    std::copy(k.begin() + nx, k.end(), ky.begin());
    out.add_term(kx, c * mu.moment(ky));
  }
  return out;
}

MeasureRep pushforward_affine(const MeasureRep& mu, const Eigen::MatrixXd& M, const Eigen::VectorXd& c) {
  if (M.cols() != mu.dim() || M.rows() != c.size())
    throw Error(ErrorCode::SpaceMismatch, "pushforward: map dimensions do not match the measure");
  const int out_dim = static_cast<int>(M.rows());
  if (mu.is_atomic()) {
    std::vector<Atom> atoms;
    for (const auto& a : mu.atoms()) {
      Eigen::Map<const Eigen::VectorXd> y(a.point.data(), static_cast<Eigen::Index>(a.point.size()));
      Eigen::VectorXd z = M * y + c;
      atoms.push_back({std::vector<double>(z.data(), z.data() + z.size()), a.weight});
    }
    return MeasureRep::from_atoms(out_dim, std::move(atoms));
  }
  const int degree = mu.table().max_degree();
  const StateSpace ys = StateSpace::euclidean(mu.dim());
  const StateSpace none = StateSpace::euclidean(0);
  std::vector<Polynomial> images;
  for (int i = 0; i < out_dim; ++i) {
    Polynomial p = Polynomial::constant(ys, c(i));
    for (int j = 0; j < mu.dim(); ++j) p += Polynomial::variable(ys, j, M(i, j));
    images.push_back(p);
  }
  MomentTable t;
  t.dim = out_dim;
  for (const auto& k : enumerate_indices(out_dim, degree)) {
    Polynomial prod = Polynomial::constant(ys, 1.0);
    for (int i = 0; i < out_dim; ++i) prod *= images[static_cast<std::size_t>(i)].pow(k[static_cast<std::size_t>(i)]);
    try {
      Polynomial v = integrate_out(prod, none, mu);
      t.values[k] = v.is_zero() ? 0.0 : v.terms().begin()->second;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MomentUnavailable) throw;
    }
  }
  return MeasureRep::from_moments(std::move(t));
}

}  // namespace pjd
