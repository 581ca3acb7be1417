#include "pjd/classify.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "pjd/error.hpp"

namespace pjd {

std::string TypeTag::name() const {
  switch (kind) {
    case TagKind::Typed:
      return type_name(*spec);
    case TagKind::Type4Candidate:
      return "interval-type-4-candidate";
    case TagKind::Unclassifiable:
      break;
  }
  return "unclassifiable";
}

namespace {

TypeTag typed(TypedSpec s) {
  TypeTag t;
  t.kind = TagKind::Typed;
  t.spec = canonicalize(s);
  return t;
}

TypeTag candidate(std::string why) {
  TypeTag t;
  t.kind = TagKind::Type4Candidate;
  t.detail = std::move(why);
  return t;
}

std::vector<const JumpSpec*> active_jumps(const LevyTriplet& t) {
  std::vector<const JumpSpec*> out;
  for (const auto& j : t.jumps)
    if (!j.mu.is_zero() && !j.lambda.num.is_zero()) out.push_back(&j);
  return out;
}

double coef(const Polynomial& p, int var_power) {
  if (p.nvars() == 0) return var_power == 0 ? p.coefficient({}) : 0.0;
  MultiIndex k(static_cast<std::size_t>(p.nvars()), 0);
  k[0] = var_power;
  return p.coefficient(k);
}

// Pushforward of mu under y -> M y + c, where atoms get `atom_shift` added
// and moment tables do not (tables are stated over displacements).
MeasureRep push(const MeasureRep& mu, const Eigen::MatrixXd& M, Eigen::VectorXd c, const Eigen::VectorXd& atom_shift) {
  if (mu.is_atomic()) c += atom_shift;
  return pushforward_affine(mu, M, c);
}

TypeTag classify_interval(const LevyTriplet& t) {
  const StateSpace& s = t.space;
  const Polynomial& a = t.a[0][0];
  const double A = coef(a, 1);
  const double kappa = -coef(t.b[0], 1);
  const double kt = coef(t.b[0], 0);
  const double theta = kappa > 0.0 ? kt / kappa : 0.0;
  const double ascale = std::max(1.0, a.max_abs_coefficient());
  Polynomial expect_a = A * (Polynomial::variable(s, 0) - Polynomial::variable(s, 0).pow(2));
  if (!a.approx_equal(expect_a, 1e-12 * ascale)) {
    TypeTag tag;
    tag.detail = "diffusion is not of the form A x(1-x)";
    return tag;
  }
  if (kappa == 0.0 && std::abs(kt) > 1e-14) {
    TypeTag tag;
    tag.detail = "constant nonzero drift";
    return tag;
  }
  const auto jumps = active_jumps(t);
  if (jumps.empty()) return typed(IntervalType0{A, kappa, theta});
  if (jumps.size() > 1) {
    TypeTag tag;
    tag.detail = "several jump kernels; the taxonomy covers a single kernel";
    return tag;
  }
  const JumpSpec& j = *jumps.front();
  const int ny = j.gamma.ny;
  // gamma(x, y) = u(y) + v(y) x
  Eigen::MatrixXd UV(2, ny);
  Eigen::VectorXd c0(2);
  c0 << coef(j.gamma.offset[0], 0), coef(j.gamma.offset[0], 1);
  for (int m = 0; m < ny; ++m) {
    UV(0, m) = coef(j.gamma.coeff[0][static_cast<std::size_t>(m)], 0);
    UV(1, m) = coef(j.gamma.coeff[0][static_cast<std::size_t>(m)], 1);
  }
  const Eigen::VectorXd none2 = Eigen::VectorXd::Zero(2);

  if (const auto lam = j.lambda.constant_value()) {
    if (!(*lam > 0.0)) return candidate("nonpositive constant intensity");
    // (y1, y2) = (-u - v, u)
    Eigen::MatrixXd T(2, 2);
    T << -1, -1, 1, 0;
    MeasureRep mu = pushforward_affine(j.mu, T * UV, T * c0).scaled(*lam);
    return typed(IntervalType1{A, kappa, theta, std::move(mu)});
  }

  const MeasureRep uv = pushforward_affine(j.mu, UV, c0);
  const double muu = uv.moment({2, 0});
  const double muv = uv.moment({1, 1});
  const double mvv = uv.moment({0, 2});
  if (!(mvv > 0.0)) return candidate("jump sizes do not depend on the state");
  double xs = -muv / mvv;
  const double resid = muu - muv * muv / mvv;
  if (resid > 1e-9 * (muu + mvv)) return candidate("jump sizes share no common zero");
  if (std::abs(xs) <= 1e-8) xs = 0.0;
  if (std::abs(xs - 1.0) <= 1e-8) xs = 1.0;
  if (xs < 0.0 || xs > 1.0) return candidate("common zero of the jump sizes outside [0,1]");

  // canonical scalar y = -v
  Eigen::MatrixXd negv = -UV.row(1);
  Eigen::VectorXd negc(1);
  negc << -c0(1);
  const MeasureRep mu_y = pushforward_affine(j.mu, negv, negc);
  const Polynomial x = Polynomial::variable(s, 0);
  const Polynomial one = Polynomial::constant(s, 1.0);
  try {
    if (xs == 0.0 || xs == 1.0) {
      const Polynomial pole = xs == 0.0 ? x : one - x;
      const Polynomial g = divide_exact(j.lambda.num * pole, j.lambda.den);
      if (g.degree() > 1) return candidate("lambda x is not affine");
      const double cval = g.eval({xs});
      if (!(cval > 0.0)) return candidate("intensity vanishes on the far boundary");
      const double q = xs == 0.0 ? coef(g, 1) / cval : g.eval({0.0}) / cval - 1.0;
      IntervalType2 out{A, kappa, theta, q, xs == 0.0 ? 0 : 1, mu_y.scaled(cval)};
      return typed(out);
    }
    const Polynomial shifted = x - xs;
    const Polynomial g = divide_exact(j.lambda.num * shifted * shifted, j.lambda.den);
    if (g.degree() > 2) return candidate("lambda (x - x*)^2 is not quadratic");
    IntervalType3 out;
    out.x_star = xs;
    out.kappa = kappa;
    out.theta = theta;
    out.A = A;
    out.q0 = coef(g, 0);
    out.q1 = coef(g, 1);
    out.q2 = coef(g, 2);
    out.mu = mu_y;
    return typed(out);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotDivisible) throw;
    return candidate("intensity has poles away from the common zero");
  }
}

struct SimplexData {
  Eigen::MatrixXd alpha;
  Eigen::MatrixXd B;
};

std::vector<double> vertex(const StateSpace& s, int i) {
  std::vector<double> e(static_cast<std::size_t>(s.d), 0.0);
  e[static_cast<std::size_t>(i)] = 1.0;
  return free_coordinates(s, e);
}

[[noreturn]] void unclassifiable(const std::string& why) { throw Error(ErrorCode::AssumptionAViolated, why); }

TypeTag classify_simplex(const LevyTriplet& t) {
  const StateSpace& s = t.space;
  const int d = s.d;
  SimplexData sd;
  sd.B.resize(d, d);
  for (int j = 0; j < d; ++j) {
    const auto v = vertex(s, j);
    for (int i = 0; i < d; ++i) sd.B(i, j) = t.b[static_cast<std::size_t>(i)].eval(v);
  }
  std::vector<double> centre(static_cast<std::size_t>(d), 1.0 / d);
  const auto xc = free_coordinates(s, centre);
  sd.alpha = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) sd.alpha(i, j) = -t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(xc) * d * d;
  const PolyMatrix expect = simplex_type0_diffusion(s, sd.alpha);
  double ascale = 1.0;
  for (const auto& row : t.a)
    for (const auto& p : row) ascale = std::max(ascale, p.max_abs_coefficient());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (!t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].approx_equal(
              expect[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], 1e-10 * ascale))
        unclassifiable("diffusion is not of the form a_ij = -alpha_ij x_i x_j");

  const auto jumps = active_jumps(t);
  if (jumps.empty()) return typed(SimplexType0{sd.alpha, sd.B});
  if (jumps.size() > 1) unclassifiable("several jump kernels");
  const JumpSpec& j = *jumps.front();
  const int ny = j.gamma.ny;

  // W_m(k, i) = coefficient of y_m in gamma_k(e_i, y); index ny is the offset
  std::vector<Eigen::MatrixXd> W(static_cast<std::size_t>(ny) + 1, Eigen::MatrixXd::Zero(d, d));
  for (int i = 0; i < d; ++i) {
    const auto v = vertex(s, i);
    for (int k = 0; k < d; ++k) {
      for (int m = 0; m < ny; ++m)
        W[static_cast<std::size_t>(m)](k, i) = j.gamma.coeff[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)].eval(v);
      W[static_cast<std::size_t>(ny)](k, i) = j.gamma.offset[static_cast<std::size_t>(k)].eval(v);
    }
  }
  auto gamma_at_vertex = [&](int i) {
    // affine map y -> gamma(e_i, y)
    Eigen::MatrixXd M(d, ny);
    Eigen::VectorXd c(d);
    for (int k = 0; k < d; ++k) {
      for (int m = 0; m < ny; ++m) M(k, m) = W[static_cast<std::size_t>(m)](k, i);
      c(k) = W[static_cast<std::size_t>(ny)](k, i);
    }
    return std::pair{M, c};
  };

  if (const auto lam = j.lambda.constant_value()) {
    if (!(*lam > 0.0)) unclassifiable("nonpositive constant intensity");
    Eigen::MatrixXd M(d * d, ny);
    Eigen::VectorXd c(d * d), shift = Eigen::VectorXd::Zero(d * d);
    for (int i = 0; i < d; ++i) {
      auto [Mi, ci] = gamma_at_vertex(i);
      M.block(i * d, 0, d, ny) = Mi;
      c.segment(i * d, d) = ci;
      shift(i * d + i) = 1.0;
    }
    return typed(SimplexType1{sd.alpha, sd.B, push(j.mu, M, c, shift).scaled(*lam)});
  }

  // gamma = H(y) P1(x): every row of every W_m (and of W(y) per atom) is a
  // multiple of the vertex values p of P1.
  std::vector<Eigen::RowVectorXd> rows;
  if (j.mu.is_atomic()) {
    for (const auto& atom : j.mu.atoms()) {
      Eigen::MatrixXd Wy = W[static_cast<std::size_t>(ny)];
      for (int m = 0; m < ny; ++m) Wy += atom.point[static_cast<std::size_t>(m)] * W[static_cast<std::size_t>(m)];
      for (int k = 0; k < d; ++k) rows.push_back(Wy.row(k));
    }
  } else {
    for (const auto& Wm : W)
      for (int k = 0; k < d; ++k) rows.push_back(Wm.row(k));
  }
  Eigen::MatrixXd R(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t r = 0; r < rows.size(); ++r) R.row(static_cast<Eigen::Index>(r)) = rows[r];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0) unclassifiable("jump sizes vanish identically");
  if (sv.size() > 1 && sv(1) > 1e-9 * sv(0)) unclassifiable("jump sizes are not of the form H(y) P1(x)");
  Eigen::VectorXd p = svd.matrixV().col(0);
  const double pmax = p.cwiseAbs().maxCoeff();
  std::vector<int> nz;
  for (int i = 0; i < d; ++i) {
    if (std::abs(p(i)) <= 1e-9 * pmax)
      p(i) = 0.0;
    else
      nz.push_back(i);
  }

  if (nz.size() == 1) {
    const int i = nz.front();
    const Polynomial xi = Polynomial::coordinate(s, i);
    Polynomial g(s);
    try {
      g = divide_exact(j.lambda.num * xi, j.lambda.den);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotDivisible) throw;
      unclassifiable("lambda x_i is not a polynomial");
    }
    if (g.degree() > 1) unclassifiable("lambda x_i is not affine");
    SimplexType2 out;
    out.i = i;
    out.alpha = sd.alpha;
    out.B = sd.B;
    for (int k = 0; k < d; ++k) out.q1.push_back(g.eval(vertex(s, k)));
    auto [M, c] = gamma_at_vertex(i);
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(d);
    shift(i) = 1.0;
    out.mu = push(j.mu, M, c, shift);
    return typed(out);
  }

  if (nz.size() == 2 && p(nz[0]) * p(nz[1]) < 0.0) {
    const int jj = nz[0];
    const int ii = nz[1];
    const double c = -p(ii) / p(jj);
    for (int k = 0; k < d; ++k) {
      if (k == ii || k == jj) continue;
      for (const auto& Wm : W)
        if (Wm.row(k).cwiseAbs().maxCoeff() > 1e-9 * sv(0)) unclassifiable("jump direction is not e_i - e_j");
    }
    const Polynomial ell = Polynomial::coordinate(s, jj) - c * Polynomial::coordinate(s, ii);
    Polynomial g(s);
    try {
      g = divide_exact(j.lambda.num * ell * ell, j.lambda.den);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotDivisible) throw;
      unclassifiable("lambda (x_j - c x_i)^2 is not a polynomial");
    }
    if (g.degree() > 2) unclassifiable("lambda (x_j - c x_i)^2 is not quadratic");
    // homogeneous quadratic coefficients Q_kl of g on the simplex
    auto at = [&](int k, int l) {
      std::vector<double> pt(static_cast<std::size_t>(d), 0.0);
      pt[static_cast<std::size_t>(k)] += 0.5;
      pt[static_cast<std::size_t>(l)] += 0.5;
      return g.eval(free_coordinates(s, pt));
    };
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < d; ++k) Q(k, k) = g.eval(vertex(s, k));
    for (int k = 0; k < d; ++k)
      for (int l = k + 1; l < d; ++l) Q(k, l) = 4.0 * at(k, l) - Q(k, k) - Q(l, l);
    const double qscale = std::max(1.0, Q.cwiseAbs().maxCoeff());
    for (int k = 0; k < d; ++k)
      for (int l = k; l < d; ++l) {
        const bool ok = k == ii || k == jj || l == ii || l == jj;
        if (!ok && std::abs(Q(k, l)) > 1e-9 * qscale) unclassifiable("intensity numerator outside span{x_i x_k, x_j x_k}");
      }
    auto Qs = [&](int k, int l) { return k <= l ? Q(k, l) : Q(l, k); };
    SimplexType3 out;
    out.i = ii;
    out.j = jj;
    out.c = c;
    out.alpha = sd.alpha;
    out.B = sd.B;
    out.qi.assign(static_cast<std::size_t>(d), 0.0);
    out.qj.assign(static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k < d; ++k) {
      out.qi[static_cast<std::size_t>(k)] = Qs(ii, k);
      if (k != ii) out.qj[static_cast<std::size_t>(k)] = Qs(jj, k);
    }
    // scalar y = gamma_i(e_j, y)
    auto [M, cv] = gamma_at_vertex(jj);
    Eigen::MatrixXd Mi = M.row(ii);
    Eigen::VectorXd ci(1);
    ci << cv(ii);
    out.mu = pushforward_affine(j.mu, Mi, ci);
    return typed(out);
  }
  unclassifiable("jump factor P1 is neither x_i nor x_j - c x_i");
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << (v == 0.0 ? 0.0 : v);
  return os.str();
}

std::string vec(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s + "]";
}

std::string mat(const Eigen::MatrixXd& m) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    s += i ? ",[" : "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += (j ? "," : "") + num(m(i, j));
    s += "]";
  }
  return s + "]";
}

std::string measure(const MeasureRep& mu) {
  if (!mu.is_atomic()) {
    std::string s = "moments{";
    bool first = true;
    for (const auto& [k, v] : mu.table().values) {
      s += first ? "" : ",";
      first = false;
      std::string key;
      for (std::size_t i = 0; i < k.size(); ++i) key += (i ? " " : "") + std::to_string(k[i]);
      s += "(" + key + "):" + num(v);
    }
    return s + "}";
  }
  std::string s = "atoms{";
  for (std::size_t a = 0; a < mu.atoms().size(); ++a)
    s += (a ? "," : "") + vec(mu.atoms()[a].point) + ":" + num(mu.atoms()[a].weight);
  return s + "}";
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

TypeTag classify(const LevyTriplet& triplet, int grid_n) {
  for (const auto& j : triplet.jumps)
    if (!j.gamma.is_affine())
      throw Error(ErrorCode::NotAffineJumpSizes, "gamma has state degree " + std::to_string(j.gamma.state_degree()));
  const ValidationReport r = validate(triplet, grid_n);
  if (!r.ok()) {
    const auto& v = r.violations.front();
    throw Error(ErrorCode::InvalidTriplet, v.condition + " at " + v.location + " (" + num(v.magnitude) + ")");
  }
  if (triplet.space.is_simplex()) return classify_simplex(triplet);
  return classify_interval(triplet);
}

std::vector<std::pair<std::string, std::string>> describe(const TypedSpec& spec) {
  using KV = std::vector<std::pair<std::string, std::string>>;
  return std::visit(
      overloaded{
          [](const IntervalType0& p) -> KV { return {{"A", num(p.A)}, {"kappa", num(p.kappa)}, {"theta", num(p.theta)}}; },
          [](const IntervalType1& p) -> KV {
            return {{"A", num(p.A)}, {"kappa", num(p.kappa)}, {"theta", num(p.theta)}, {"mu", measure(p.mu)}};
          },
          [](const IntervalType2& p) -> KV {
            return {{"q", num(p.q)},         {"side", std::to_string(p.side)}, {"A", num(p.A)},
                    {"kappa", num(p.kappa)}, {"theta", num(p.theta)},          {"mu", measure(p.mu)}};
          },
          [](const IntervalType3& p) -> KV {
            return {{"x_star", num(p.x_star)}, {"A", num(p.A)},   {"kappa", num(p.kappa)}, {"theta", num(p.theta)},
                    {"q0", num(p.q0)},         {"q1", num(p.q1)}, {"q2", num(p.q2)},       {"mu", measure(p.mu)}};
          },
          [](const IntervalType4& p) -> KV {
            return {{"alpha", num(p.alpha.real()) + (p.alpha.imag() < 0 ? "" : "+") + num(p.alpha.imag()) + "i"},
                    {"A", num(p.A)},
                    {"kappa", num(p.kappa)},
                    {"theta", num(p.theta)},
                    {"L", num(p.L)}};
          },
          [](const SimplexType0& p) -> KV { return {{"alpha", mat(p.alpha)}, {"B", mat(p.B)}}; },
          [](const SimplexType1& p) -> KV { return {{"alpha", mat(p.alpha)}, {"B", mat(p.B)}, {"mu", measure(p.mu)}}; },
          [](const SimplexType2& p) -> KV {
            return {{"i", std::to_string(p.i + 1)}, {"q1", vec(p.q1)}, {"alpha", mat(p.alpha)}, {"B", mat(p.B)}, {"mu", measure(p.mu)}};
          },
          [](const SimplexType3& p) -> KV {
            return {{"i", std::to_string(p.i + 1)}, {"j", std::to_string(p.j + 1)}, {"c", num(p.c)},       {"qi", vec(p.qi)},
                    {"qj", vec(p.qj)},          {"alpha", mat(p.alpha)},    {"B", mat(p.B)},       {"mu", measure(p.mu)}};
          },
      },
      spec);
}

}  // namespace pjd
