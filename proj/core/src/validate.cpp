#include "pjd/validate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "pjd/error.hpp"

namespace pjd {

void ValidationReport::add(std::string condition, std::string location, double magnitude) {
  violations.push_back({std::move(condition), std::move(location), magnitude});
}

void ValidationReport::merge(const ValidationReport& other) {
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

bool ValidationReport::has(const std::string& condition) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.condition == condition; });
}

namespace {

// sum_i gamma_i(x, y) must vanish for mu-a.e. y: checked atom by atom, or
// through \int (sum_i gamma_i)^2 dmu for moment tables.
double conservation_defect(const AffineJumpMap& g, const MeasureRep& mu) {
  const StateSpace& s = g.offset.front().space();
  Polynomial c0(s);
  for (const auto& p : g.offset) c0 += p;
  std::vector<Polynomial> c(static_cast<std::size_t>(g.ny), Polynomial(s));
  for (const auto& row : g.coeff)
    for (int m = 0; m < g.ny; ++m) c[static_cast<std::size_t>(m)] += row[static_cast<std::size_t>(m)];
  auto strict = [&] {
    double w = c0.max_abs_coefficient();
    for (const auto& p : c) w = std::max(w, p.max_abs_coefficient());
    return w;
  };
  if (mu.is_atomic()) {
    double w = 0.0;
    for (const auto& a : mu.atoms()) {
      Polynomial L = c0;
      for (int m = 0; m < g.ny; ++m) L += c[static_cast<std::size_t>(m)] * a.point[static_cast<std::size_t>(m)];
      w = std::max(w, L.max_abs_coefficient());
    }
    return w;
  }
  auto mom = [&](MultiIndex k) { return mu.try_moment(k); };
  const MultiIndex zero(static_cast<std::size_t>(g.ny), 0);
  Polynomial Q(s);
  auto add = [&](const Polynomial& p, const MultiIndex& k) {
    if (p.is_zero()) return true;
    const auto v = mom(k);
    if (!v) return false;
    Q += p * *v;
    return true;
  };
  bool ok = add(c0 * c0, zero);
  for (int m = 0; m < g.ny && ok; ++m) {
    MultiIndex k = zero;
    k[static_cast<std::size_t>(m)] = 1;
    ok = add(2.0 * (c0 * c[static_cast<std::size_t>(m)]), k);
    for (int n = 0; n < g.ny && ok; ++n) {
      MultiIndex k2 = k;
      k2[static_cast<std::size_t>(n)] += 1;
      ok = add(c[static_cast<std::size_t>(m)] * c[static_cast<std::size_t>(n)], k2);
    }
  }
  return ok ? std::sqrt(Q.max_abs_coefficient()) : strict();
}

std::string where(std::span<const double> x) {
  std::ostringstream os;
  os.precision(6);
  os << "x=(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ")";
  return os.str();
}

double matrix_scale(const PolyMatrix& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (const auto& p : row) s = std::max(s, p.max_abs_coefficient());
  return std::max(s, 1.0);
}

double vector_scale(const std::vector<Polynomial>& v) {
  double s = 0.0;
  for (const auto& p : v) s = std::max(s, p.max_abs_coefficient());
  return std::max(s, 1.0);
}

void compositions(int parts, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = total; v >= 0; --v) {
    cur.push_back(v);
    compositions(parts - 1, total - v, cur, out);
    cur.pop_back();
  }
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Ambient first jump moment sum_j lambda_j(x) \int gamma_i mu_j at x (free coords).
double ambient_first_moment(const LevyTriplet& t, int i, std::span<const double> x) {
  double total = 0.0;
  for (const auto& j : t.jumps) {
    if (j.mu.is_zero()) continue;
    const double lam = j.lambda.eval(x);
    if (lam == 0.0) continue;
    const std::size_t ui = static_cast<std::size_t>(i);
    double m = j.gamma.offset[ui].eval(x) * j.mu.moment(MultiIndex(static_cast<std::size_t>(j.mu.dim()), 0));
    for (int r = 0; r < j.gamma.ny; ++r) {
      const auto& c = j.gamma.coeff[ui][static_cast<std::size_t>(r)];
      if (c.is_zero()) continue;
      MultiIndex e(static_cast<std::size_t>(j.mu.dim()), 0);
      e[static_cast<std::size_t>(r)] = 1;
      m += c.eval(x) * j.mu.moment(e);
    }
    total += lam * m;
  }
  return total;
}

void check_support(ValidationReport& r, const LevyTriplet& t, const std::vector<std::vector<double>>& grid) {
  const StateSpace& s = t.space;
  for (std::size_t jj = 0; jj < t.jumps.size(); ++jj) {
    const auto& j = t.jumps[jj];
    if (!j.mu.is_atomic() || j.mu.is_zero()) continue;
    double worst = 0.0;
    std::vector<double> at;
    for (const auto& pt : grid) {
      const auto xf = free_coordinates(s, pt);
      if (j.lambda.eval(xf) <= 0.0) continue;
      for (const auto& a : j.mu.atoms()) {
        const auto g = j.gamma.eval(xf, a.point);
        double viol = 0.0;
        double sum = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double v = pt[i] + g[i];
          sum += v;
          viol = std::max(viol, -v);
          if (s.is_interval()) viol = std::max(viol, v - 1.0);
        }
        if (s.is_simplex()) viol = std::max(viol, std::abs(sum - 1.0));
        if (viol > worst) {
          worst = viol;
          at = pt;
        }
      }
    }
    if (worst > 1e-9) r.add("jump-support", "jump " + std::to_string(jj) + " " + where(at), worst);
  }
}

void check_intensity(ValidationReport& r, const LevyTriplet& t, const std::vector<std::vector<double>>& grid) {
  for (std::size_t jj = 0; jj < t.jumps.size(); ++jj) {
    const auto& lam = t.jumps[jj].lambda;
    for (const auto& pt : grid) {
      const auto xf = free_coordinates(t.space, pt);
      const double v = lam.eval(xf);
      if (v < -1e-10 * std::max(1.0, lam.num.max_abs_coefficient() / std::max(1e-300, lam.den.max_abs_coefficient()))) {
        r.add("intensity-nonneg", "jump " + std::to_string(jj) + " " + where(pt), -v);
        break;
      }
    }
  }
}

std::vector<std::vector<double>> all_pole_points(const LevyTriplet& t, ValidationReport& r) {
  std::vector<std::vector<double>> pts;
  for (const auto& j : t.jumps) {
    if (j.lambda.den.degree() == 0) continue;
    if (t.space.is_simplex() && !j.lambda.pole_factor) {
      r.warn("intensity pole set unknown on the simplex; pole consistency not checked");
      continue;
    }
    for (auto& p : pole_points(j.lambda)) pts.push_back(std::move(p));
  }
  return pts;
}

// Checks sum_j lambda_j p_{k,j} in Pol_{|k|} and, at pole points, that the
// realized value (with corrections for |k| = 2) matches the polynomial.
void check_moment_maps(ValidationReport& r, const LevyTriplet& t, int max_order) {
  const StateSpace& s = t.space;
  const int nf = s.free_vars();
  ValidationReport scratch;
  const auto poles = all_pole_points(t, scratch);
  r.merge(scratch);
  const double ascale = matrix_scale(t.a);
  for (int n = 2; n <= max_order; ++n) {
    const std::string id = n == 2 ? "second-moment-polynomial" : "jump-moment-polynomial-" + std::to_string(n);
    bool unavailable = false;
    for (const auto& k : enumerate_indices(nf, n)) {
      if (total_degree(k) != n) continue;
      Polynomial P(s);
      try {
        P = integrated_jump_moment(t, k);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::NotPolynomial) {
          r.add(id, "k=" + where(std::vector<double>(k.begin(), k.end())).substr(2), 0.0);
          continue;
        }
        if (e.code() == ErrorCode::MomentUnavailable) {
          unavailable = true;
          break;
        }
        throw;
      }
      if (P.degree() > n) r.add(id, "degree " + std::to_string(P.degree()) + " > " + std::to_string(n), 0.0);
      const double scale = std::max(ascale, std::max(1.0, P.max_abs_coefficient()));
      for (const auto& xp : poles) {
        const double realized = jump_moment_at(t, k, xp);
        double lhs = realized;
        double rhs = P.eval(xp);
        if (n == 2) {
          // locate the free-coordinate pair (i, j) of k
          int i = -1, jx = -1;
          for (int v = 0; v < nf; ++v) {
            for (int c = 0; c < k[static_cast<std::size_t>(v)]; ++c) (i < 0 ? i : jx) = v;
          }
          const Eigen::MatrixXd a_real = t.diffusion_at(xp);
          const double apoly = t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(jx)].eval(xp);
          lhs += a_real(i, jx);
          rhs += apoly;
        }
        if (std::abs(lhs - rhs) > 1e-8 * scale)
          r.add(id, "pole " + where(xp) + " k=" + where(std::vector<double>(k.begin(), k.end())).substr(2),
                std::abs(lhs - rhs));
      }
    }
    if (unavailable) {
      r.warn("moments of order " + std::to_string(n) + " unavailable; polynomial-image checks stop at order " +
             std::to_string(n - 1));
      break;
    }
  }
}

void validate_interval(ValidationReport& r, const LevyTriplet& t, int grid_n) {
  const auto grid = state_grid(t.space, grid_n);
  const double ascale = matrix_scale(t.a);
  for (const auto& pt : grid) {
    const double v = t.diffusion_at(pt)(0, 0);
    if (v < -1e-12 * ascale) {
      r.add("a-nonneg", where(pt), -v);
      break;
    }
  }
  for (double e : {0.0, 1.0}) {
    const double v = t.diffusion_at(std::vector<double>{e})(0, 0);
    if (std::abs(v) > 1e-12 * ascale) r.add("a-boundary", "x=" + std::to_string(static_cast<int>(e)), std::abs(v));
  }
  if (t.b[0].degree() > 1) r.add("drift-degree", "b", t.b[0].degree());
  check_intensity(r, t, grid);
  check_support(r, t, grid);
  for (double e : {0.0, 1.0}) {
    const std::vector<double> x{e};
    double flow = 0.0;
    try {
      flow = t.b[0].eval(x) - ambient_first_moment(t, 0, x);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::MomentUnavailable) throw;
      r.add(e == 0.0 ? "drift-inflow-0" : "drift-inflow-1", "infinite first jump moment", INFINITY);
      continue;
    }
    if (e == 0.0 && flow < -1e-10) r.add("drift-inflow-0", "x=0", -flow);
    if (e == 1.0 && flow > 1e-10) r.add("drift-inflow-1", "x=1", flow);
  }
  check_moment_maps(r, t, 6);
}

void validate_simplex(ValidationReport& r, const LevyTriplet& t, int grid_n) {
  const StateSpace& s = t.space;
  const int d = s.d;
  const auto grid = state_grid(s, grid_n);
  const double ascale = matrix_scale(t.a);
  const double bscale = vector_scale(t.b);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (!t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].approx_equal(
              t.a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)], 1e-12 * ascale))
        r.add("a-symmetry", "a(" + std::to_string(i) + "," + std::to_string(j) + ")", 0.0);
  for (int i = 0; i < d; ++i) {
    Polynomial row(s);
    for (int j = 0; j < d; ++j) row += t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (row.max_abs_coefficient() > 1e-12 * ascale)
      r.add("diffusion-conservation", "row " + std::to_string(i), row.max_abs_coefficient());
  }
  for (const auto& pc : t.poles) {
    for (int i = 0; i < d; ++i) {
      Polynomial row(s);
      for (int j = 0; j < d; ++j) row += pc.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (row.max_abs_coefficient() > 1e-12 * ascale)
        r.add("diffusion-conservation", "pole correction row " + std::to_string(i), row.max_abs_coefficient());
    }
  }
  Polynomial bsum(s);
  for (const auto& bi : t.b) {
    bsum += bi;
    if (bi.degree() > 1) r.add("drift-degree", "b", bi.degree());
  }
  if (bsum.max_abs_coefficient() > 1e-12 * bscale) r.add("drift-conservation", "sum_i b_i = " + bsum.to_string(), bsum.max_abs_coefficient());
  for (std::size_t jj = 0; jj < t.jumps.size(); ++jj) {
    const auto& g = t.jumps[jj].gamma;
    const double worst = conservation_defect(g, t.jumps[jj].mu);
    if (worst > 1e-12) r.add("jump-conservation", "jump " + std::to_string(jj), worst);
  }
  for (const auto& pt : grid) {
    const auto xf = free_coordinates(s, pt);
    const Eigen::MatrixXd a = t.diffusion_at(xf);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    const double mn = es.eigenvalues().minCoeff();
    if (mn < -1e-10 * ascale) {
      r.add("a-psd", where(pt), -mn);
      break;
    }
  }
  bool face_diff = false, face_in = false;
  for (const auto& pt : grid) {
    const auto xf = free_coordinates(s, pt);
    for (int k = 0; k < d; ++k) {
      if (pt[static_cast<std::size_t>(k)] != 0.0) continue;
      const Eigen::MatrixXd a = t.diffusion_at(xf);
      if (!face_diff && std::abs(a(k, k)) > 1e-12 * ascale) {
        r.add("face-diffusion", where(pt) + " i=" + std::to_string(k), std::abs(a(k, k)));
        face_diff = true;
      }
      if (face_in) continue;
      double flow = 0.0;
      try {
        flow = t.b[static_cast<std::size_t>(k)].eval(xf) - ambient_first_moment(t, k, xf);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::MomentUnavailable) throw;
        r.add("face-inflow", where(pt) + " infinite first jump moment", INFINITY);
        face_in = true;
        continue;
      }
      if (flow < -1e-10) {
        r.add("face-inflow", where(pt) + " i=" + std::to_string(k), -flow);
        face_in = true;
      }
    }
  }
  check_intensity(r, t, grid);
  check_support(r, t, grid);
  check_moment_maps(r, t, 4);
}

}  // namespace

std::vector<std::vector<double>> state_grid(const StateSpace& space, int grid_n, std::size_t max_points) {
  std::vector<std::vector<double>> out;
  const int n = std::max(grid_n, 2);
  if (!space.is_simplex()) {
    for (int g = 0; g < n; ++g) out.push_back({static_cast<double>(g) / (n - 1)});
    return out;
  }
  const int d = space.d;
  int m = n - 1;
  while (m > 1 && binom(m + d - 1, d - 1) > static_cast<double>(max_points)) --m;
  std::vector<std::vector<int>> comps;
  std::vector<int> cur;
  compositions(d, m, cur, comps);
  for (const auto& c : comps) {
    std::vector<double> pt(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) pt[static_cast<std::size_t>(i)] = static_cast<double>(c[static_cast<std::size_t>(i)]) / m;
    out.push_back(std::move(pt));
  }
  return out;
}

std::vector<std::vector<double>> pole_points(const RationalFn& lambda, int samples) {
  const StateSpace& s = lambda.space();
  std::vector<std::vector<double>> out;
  if (s.is_interval()) {
    const Polynomial& p = lambda.pole_factor ? *lambda.pole_factor : lambda.den;
    for (double r : real_roots_in(p, 0.0, 1.0)) out.push_back({r});
    return out;
  }
  if (!lambda.pole_factor) return out;
  const int d = s.d;
  const Polynomial& ell = *lambda.pole_factor;
  std::vector<double> lv(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    std::vector<double> e(static_cast<std::size_t>(d), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    lv[static_cast<std::size_t>(i)] = ell.eval(free_coordinates(s, e));
  }
  std::vector<std::vector<double>> corners;
  for (int i = 0; i < d; ++i) {
    if (lv[static_cast<std::size_t>(i)] == 0.0) {
      std::vector<double> e(static_cast<std::size_t>(d), 0.0);
      e[static_cast<std::size_t>(i)] = 1.0;
      corners.push_back(e);
    }
    for (int j = i + 1; j < d; ++j) {
      const double a = lv[static_cast<std::size_t>(i)], b = lv[static_cast<std::size_t>(j)];
      if (a * b >= 0.0) continue;
      const double tt = a / (a - b);
      std::vector<double> e(static_cast<std::size_t>(d), 0.0);
      e[static_cast<std::size_t>(i)] = 1.0 - tt;
      e[static_cast<std::size_t>(j)] = tt;
      corners.push_back(e);
    }
  }
  if (corners.empty()) return out;
  std::vector<std::vector<double>> amb = corners;
  std::vector<double> centroid(static_cast<std::size_t>(d), 0.0);
  for (const auto& c : corners)
    for (int i = 0; i < d; ++i) centroid[static_cast<std::size_t>(i)] += c[static_cast<std::size_t>(i)] / corners.size();
  amb.push_back(centroid);
  for (std::size_t a = 0; a < corners.size() && static_cast<int>(amb.size()) < samples; ++a) {
    std::vector<double> mid(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
      mid[static_cast<std::size_t>(i)] = 0.5 * (corners[a][static_cast<std::size_t>(i)] + centroid[static_cast<std::size_t>(i)]);
    amb.push_back(mid);
  }
  for (const auto& p : amb) out.push_back(free_coordinates(s, p));
  return out;
}

Polynomial integrated_jump_moment(const LevyTriplet& t, const MultiIndex& k) {
  const StateSpace& s = t.space;
  Polynomial N(s);
  Polynomial D = Polynomial::constant(s, 1.0);
  for (const auto& j : t.jumps) {
    if (j.mu.is_zero() || j.lambda.num.is_zero()) continue;
    const Polynomial term = j.lambda.num * j.jump_moment(k);
    if (term.is_zero()) continue;
    const Polynomial& dj = j.lambda.den;
    bool merged = false;
    try {
      const Polynomial cof = divide_exact(D, dj, 1e-12);
      N += term * cof;
      merged = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotDivisible) throw;
    }
    if (!merged) {
      N = N * dj + term * D;
      D = D * dj;
    }
  }
  if (N.is_zero()) return N;
  try {
    return divide_exact(N, D, 1e-9);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotDivisible) throw;
    throw Error(ErrorCode::NotPolynomial, "sum of lambda * jump moment is not a polynomial: (" + N.to_string() + ") / (" +
                                              D.to_string() + ")");
  }
}

double jump_moment_at(const LevyTriplet& t, const MultiIndex& k, std::span<const double> x) {
  double total = 0.0;
  for (const auto& j : t.jumps) {
    if (j.mu.is_zero()) continue;
    const double lam = j.lambda.eval(x);
    if (lam == 0.0) continue;
    total += lam * j.jump_moment(k).eval(x);
  }
  return total;
}

ValidationReport validate(const LevyTriplet& triplet, int grid_n) {
  ValidationReport r;
  for (const auto& j : triplet.jumps) {
    if (!j.gamma.is_affine()) r.add("jump-size-affine", "gamma has state degree " + std::to_string(j.gamma.state_degree()), 0.0);
  }
  if (triplet.space.is_simplex())
    validate_simplex(r, triplet, grid_n);
  else
    validate_interval(r, triplet, grid_n);
  return r;
}

}  // namespace pjd
