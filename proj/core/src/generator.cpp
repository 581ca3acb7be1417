#include "pjd/generator.hpp"

#include <cmath>
#include <sstream>

#include "pjd/error.hpp"
#include "pjd/validate.hpp"

namespace pjd {

const Polynomial& JumpMomentCache::get(const MultiIndex& k) {
  auto it = cache_.find(k);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(k, integrated_jump_moment(*triplet_, k)).first->second;
}

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

Polynomial apply_generator(const LevyTriplet& t, const Polynomial& f) {
  JumpMomentCache cache(t);
  return apply_generator(t, f, cache);
}

Polynomial apply_generator(const LevyTriplet& t, const Polynomial& f, JumpMomentCache& cache) {
  const StateSpace& s = t.space;
  if (!(f.space() == s)) throw Error(ErrorCode::SpaceMismatch, "f lives on " + f.space().name() + ", triplet on " + s.name());
  const int nf = s.free_vars();
  const int deg = f.degree();
  Polynomial out(s);
  std::vector<Polynomial> grad;
  for (int i = 0; i < nf; ++i) grad.push_back(f.partial(i));
  for (int i = 0; i < nf; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (!t.b[ui].is_zero()) out += t.b[ui] * grad[ui];
    for (int j = 0; j < nf; ++j) {
      const auto& aij = t.a[ui][static_cast<std::size_t>(j)];
      if (aij.is_zero()) continue;
      const Polynomial fij = grad[ui].partial(j);
      if (!fij.is_zero()) out += 0.5 * (aij * fij);
    }
  }
  if (t.has_jumps() && deg >= 2) {
    for (const auto& k : enumerate_indices(nf, deg)) {
      const int order = total_degree(k);
      if (order < 2) continue;
      Polynomial dk = f;
      double kfact = 1.0;
      for (int v = 0; v < nf && !dk.is_zero(); ++v) {
        for (int c = 0; c < k[static_cast<std::size_t>(v)]; ++c) dk = dk.partial(v);
        kfact *= factorial(k[static_cast<std::size_t>(v)]);
      }
      if (dk.is_zero()) continue;
      const Polynomial& R = cache.get(k);
      if (!R.is_zero()) out += (1.0 / kfact) * (dk * R);
    }
  }
  // rounding in the exact divisions can leave residue above deg f
  const double scale = std::max(1.0, out.max_abs_coefficient());
  Polynomial trimmed(s);
  for (const auto& [k, c] : out.terms()) {
    if (total_degree(k) > deg) {
      if (std::abs(c) > 1e-9 * scale)
        throw Error(ErrorCode::NotPolynomial, "generator raises the degree of " + f.to_string());
      continue;
    }
    if (std::abs(c) > 1e-15 * scale) trimmed.add_term(k, c);
  }
  return trimmed;
}

Eigen::VectorXd GeneratorMatrix::coefficients(const Polynomial& p) const {
  if (p.degree() > N) throw Error(ErrorCode::OutOfRange, "polynomial degree exceeds the matrix degree");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) v(static_cast<Eigen::Index>(i)) = p.coefficient(basis[i]);
  return v;
}

Eigen::VectorXd GeneratorMatrix::monomials_at(std::span<const double> x) const {
  Eigen::VectorXd h(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    double v = 1.0;
    for (std::size_t j = 0; j < basis[i].size(); ++j) v *= std::pow(x[j], basis[i][j]);
    h(static_cast<Eigen::Index>(i)) = v;
  }
  return h;
}

std::string monomial_name(const StateSpace& space, const MultiIndex& k) {
  std::string out;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += space.is_interval() ? std::string("x") : "x" + std::to_string(i + 1);
    if (k[i] > 1) out += "^" + std::to_string(k[i]);
  }
  return out.empty() ? "1" : out;
}

void GeneratorMatrix::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < basis.size(); ++i) os << (i ? "," : "") << monomial_name(space, basis[i]);
  os << "\n";
  os.precision(17);
  for (Eigen::Index r = 0; r < G.rows(); ++r) {
    for (Eigen::Index c = 0; c < G.cols(); ++c) os << (c ? "," : "") << G(r, c);
    os << "\n";
  }
}

GeneratorMatrix build_matrix(const LevyTriplet& t, int N) {
  if (N < 0) throw Error(ErrorCode::OutOfRange, "matrix degree must be >= 0");
  GeneratorMatrix gm;
  gm.space = t.space;
  gm.N = N;
  gm.basis = enumerate_basis(t.space, N);
  const auto n = static_cast<Eigen::Index>(gm.basis.size());
  gm.G = Eigen::MatrixXd::Zero(n, n);
  JumpMomentCache cache(t);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Polynomial h = Polynomial::monomial(t.space, gm.basis[static_cast<std::size_t>(j)], 1.0);
    const Polynomial g = apply_generator(t, h, cache);
    for (Eigen::Index i = 0; i < n; ++i) gm.G(i, j) = g.coefficient(gm.basis[static_cast<std::size_t>(i)]);
  }
  return gm;
}

LevyTriplet conic_combine(const std::vector<std::pair<double, LevyTriplet>>& parts) {
  if (parts.empty()) throw Error(ErrorCode::InvalidTriplet, "conic combination of nothing");
  const StateSpace s = parts.front().second.space;
  LevyTriplet out(s);
  const int n = s.coords();
  for (const auto& [w, t] : parts) {
    if (!(t.space == s)) throw Error(ErrorCode::SpaceMismatch, "conic combination across state spaces");
    if (!(w >= 0.0)) throw Error(ErrorCode::DomainViolation, "conic weights must be >= 0");
    if (w == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      out.b[ui] += w * t.b[ui];
      for (int j = 0; j < n; ++j) out.a[ui][static_cast<std::size_t>(j)] += w * t.a[ui][static_cast<std::size_t>(j)];
    }
    for (const auto& j : t.jumps) {
      JumpSpec js = j;
      js.lambda = j.lambda.scaled(w);
      out.jumps.push_back(std::move(js));
    }
    for (const auto& pc : t.poles) {
      PoleCorrection scaled = pc;
      for (auto& row : scaled.matrix)
        for (auto& p : row) p *= w;
      bool merged = false;
      for (auto& existing : out.poles) {
        if (existing.zero_set.approx_equal(pc.zero_set, 1e-12)) {
          for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
              existing.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] +=
                  scaled.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
          merged = true;
          break;
        }
      }
      if (!merged) out.poles.push_back(std::move(scaled));
    }
  }
  return out;
}

std::vector<RationalFn> finite_atom_intensities(const std::vector<Polynomial>& gammas, const std::vector<Polynomial>& r) {
  const std::size_t L = gammas.size();
  if (L == 0) return {};
  if (r.size() < L) throw Error(ErrorCode::OutOfRange, "need r_2..r_{L+1}: " + std::to_string(L) + " polynomials");
  const StateSpace s = gammas.front().space();
  for (std::size_t l = 0; l < L; ++l) {
    if (gammas[l].degree() > 1) throw Error(ErrorCode::NotAffineJumpSizes, "gamma_" + std::to_string(l + 1) + " is not affine");
    for (std::size_t j = l + 1; j < L; ++j) {
      const Polynomial diff = gammas[l] - gammas[j];
      const double scale = std::max({1.0, gammas[l].max_abs_coefficient(), gammas[j].max_abs_coefficient()});
      if (diff.max_abs_coefficient() <= 1e-12 * scale)
        throw Error(ErrorCode::DegenerateGammas,
                    "gamma_" + std::to_string(l + 1) + " and gamma_" + std::to_string(j + 1) + " coincide");
    }
  }
  std::vector<RationalFn> out;
  for (std::size_t l = 0; l < L; ++l) {
    // e_k of the other gammas, k = 0..L-1
    std::vector<Polynomial> e{Polynomial::constant(s, 1.0)};
    for (std::size_t j = 0; j < L; ++j) {
      if (j == l) continue;
      e.push_back(Polynomial(s));
      for (std::size_t k = e.size() - 1; k >= 1; --k) e[k] += e[k - 1] * gammas[j];
    }
    Polynomial q(s);
    for (std::size_t k = 0; k < L; ++k) {
      // r_{L-k+1} sits at index L-k-1
      const Polynomial term = e[k] * r[L - k - 1];
      if (k % 2 == 0)
        q += term;
      else
        q -= term;
    }
    // cancel affine factors shared with q so that removable zeros of the
    // denominator do not read as poles
    std::vector<Polynomial> factors{gammas[l], gammas[l]};
    for (std::size_t j = 0; j < L; ++j)
      if (j != l) factors.push_back(gammas[l] - gammas[j]);
    Polynomial den = Polynomial::constant(s, 1.0);
    for (const Polynomial& f : factors) {
      if (f.degree() >= 1 && !q.is_zero()) {
        const DivisionResult dr = divide(q, f);
        if (dr.remainder.max_abs_coefficient() <= 1e-10 * std::max(1.0, q.max_abs_coefficient())) {
          q = dr.quotient;
          continue;
        }
      }
      den *= f;
    }
    const DivisionResult pole = divide(den, gammas[l]);
    const bool has_pole = gammas[l].degree() >= 1 &&
                          pole.remainder.max_abs_coefficient() <= 1e-10 * std::max(1.0, den.max_abs_coefficient());
    out.emplace_back(q, den, has_pole ? std::optional<Polynomial>(gammas[l]) : std::nullopt);
  }
  return out;
}

LevyTriplet finite_atom_triplet(const Polynomial& a, const Polynomial& b, const std::vector<Polynomial>& gammas,
                                const std::vector<RationalFn>& lambdas) {
  if (gammas.size() != lambdas.size()) throw Error(ErrorCode::OutOfRange, "one intensity per jump size");
  const StateSpace s = StateSpace::interval();
  LevyTriplet t(s);
  t.a[0][0] = a;
  t.b[0] = b;
  for (std::size_t l = 0; l < gammas.size(); ++l) {
    JumpSpec j;
    j.lambda = lambdas[l];
    j.gamma = AffineJumpMap(s, 1);
    j.gamma.coeff[0][0] = gammas[l];
    j.mu = MeasureRep::from_atoms(1, {Atom{{1.0}, 1.0}});
    t.jumps.push_back(std::move(j));
  }
  return t;
}

}  // namespace pjd
