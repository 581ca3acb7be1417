#include "pjd/simulate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <random>
#include <thread>

#include "pjd/error.hpp"
#include "pjd/moments.hpp"
#include "pjd/typed_spec.hpp"
#include "pjd/validate.hpp"

namespace pjd {

std::size_t PathSet::time_index(double t) const {
  const double tol = 1e-9 * std::max(1.0, times.empty() ? 1.0 : times.back());
  auto it = std::lower_bound(times.begin(), times.end(), t - tol);
  if (it == times.end() || std::abs(*it - t) > tol) throw Error(ErrorCode::TimeNotOnGrid, "t=" + std::to_string(t) + " is not stored");
  return static_cast<std::size_t>(it - times.begin());
}

Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& A, double reg) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const double mn = es.eigenvalues().minCoeff();
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  if (mn < -std::max(reg, 1e-8 * norm)) throw Error(ErrorCode::TooIndefinite, "smallest eigenvalue " + std::to_string(mn));
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

int worker_count(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("PJD_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

namespace {

// Polynomial flattened for repeated evaluation from a shared power table.
struct CPoly {
  std::vector<double> coef;
  std::vector<int> exps;  // nv per term
  bool zero() const { return coef.empty(); }
};

struct Powers {
  int nv = 1, width = 1;
  std::vector<double> pw;  // [v][e]
  void set(const double* x) {
    for (int v = 0; v < nv; ++v) {
      double* row = pw.data() + static_cast<std::size_t>(v * width);
      row[0] = 1.0;
      for (int e = 1; e < width; ++e) row[e] = row[e - 1] * x[v];
    }
  }
  double eval(const CPoly& p) const {
    double s = 0.0;
    const int* k = p.exps.data();
    for (double c : p.coef) {
      double t = c;
      for (int v = 0; v < nv; ++v, ++k) t *= pw[static_cast<std::size_t>(v * width + *k)];
      s += t;
    }
    return s;
  }
};

CPoly compile(const Polynomial& p) {
  CPoly c;
  for (const auto& [k, v] : p.terms()) {
    c.coef.push_back(v);
    c.exps.insert(c.exps.end(), k.begin(), k.end());
  }
  return c;
}

struct CJump {
  CPoly num, den;
  double den_tol = 0.0;
  double mass = 0.0;
  std::vector<double> cum;                // cumulative weights
  std::vector<std::vector<CPoly>> atoms;  // per atom, per ambient coordinate
  std::vector<CPoly> comp;                // sum_a w_a gamma(x, y_a)
};

struct CPole {
  CPoly zero_set;
  std::vector<CPoly> matrix;  // d*d
};

struct Model {
  StateSpace space = StateSpace::interval();
  int d = 1, nf = 1, maxdeg = 1;
  std::vector<CPoly> a;  // d*d
  std::vector<CPoly> b;
  std::vector<CPole> poles;
  std::vector<CJump> jumps;
  double wf_alpha = -1.0;  // uniform Wright-Fisher factor when >= 0
  double scale = 1.0;
};

void track_degree(Model& m, const Polynomial& p) { m.maxdeg = std::max(m.maxdeg, p.degree()); }

Model compile_model(const LevyTriplet& t) {
  Model m;
  m.space = t.space;
  m.d = t.coords();
  m.nf = t.space.free_vars();
  double sc = 1.0;
  for (int i = 0; i < m.d; ++i) {
    for (int j = 0; j < m.d; ++j) {
      const auto& p = t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      m.a.push_back(compile(p));
      track_degree(m, p);
      sc = std::max(sc, p.max_abs_coefficient());
    }
    m.b.push_back(compile(t.b[static_cast<std::size_t>(i)]));
    track_degree(m, t.b[static_cast<std::size_t>(i)]);
    sc = std::max(sc, t.b[static_cast<std::size_t>(i)].max_abs_coefficient());
  }
  m.scale = sc;
  for (const auto& pc : t.poles) {
    CPole cp;
    cp.zero_set = compile(pc.zero_set);
    track_degree(m, pc.zero_set);
    for (const auto& row : pc.matrix)
      for (const auto& p : row) {
        cp.matrix.push_back(compile(p));
        track_degree(m, p);
      }
    m.poles.push_back(std::move(cp));
  }
  for (const auto& j : t.jumps) {
    if (j.mu.is_zero() || j.lambda.num.is_zero()) continue;
    if (!j.mu.is_atomic())
      throw Error(ErrorCode::UnsupportedForSimulation, "jump measure given by moments only; simulation needs atoms");
    CJump cj;
    cj.num = compile(j.lambda.num);
    cj.den = compile(j.lambda.den);
    cj.den_tol = 1e-14 * j.lambda.den.max_abs_coefficient();
    track_degree(m, j.lambda.num);
    track_degree(m, j.lambda.den);
    std::vector<Polynomial> comp(static_cast<std::size_t>(m.d), Polynomial(t.space));
    for (const auto& atom : j.mu.atoms()) {
      if (!std::isfinite(atom.weight)) throw Error(ErrorCode::UnsupportedForSimulation, "infinite atom weight");
      cj.mass += atom.weight;
      cj.cum.push_back(cj.mass);
      std::vector<CPoly> g;
      for (int i = 0; i < m.d; ++i) {
        Polynomial gi = j.gamma.offset[static_cast<std::size_t>(i)];
        for (int r = 0; r < j.gamma.ny; ++r)
          gi += atom.point[static_cast<std::size_t>(r)] * j.gamma.coeff[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
        track_degree(m, gi);
        comp[static_cast<std::size_t>(i)] += atom.weight * gi;
        g.push_back(compile(gi));
      }
      cj.atoms.push_back(std::move(g));
    }
    for (const auto& p : comp) cj.comp.push_back(compile(p));
    m.jumps.push_back(std::move(cj));
  }
  if (t.space.is_simplex() && t.poles.empty()) {
    // a_ij = -alpha x_i x_j for a single alpha admits the factor sqrt(x_k)(delta_ik - x_i)
    std::vector<double> centre(static_cast<std::size_t>(m.d), 1.0 / m.d);
    const double alpha0 = -t.a[0][1].eval(free_coordinates(t.space, centre)) * m.d * m.d;
    Eigen::MatrixXd A = Eigen::MatrixXd::Constant(m.d, m.d, alpha0);
    A.diagonal().setZero();
    const PolyMatrix expect = simplex_type0_diffusion(t.space, A);
    bool same = alpha0 >= 0.0;
    for (int i = 0; i < m.d && same; ++i)
      for (int j = 0; j < m.d && same; ++j)
        same = t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].approx_equal(
            expect[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], 1e-12 * sc);
    if (same) m.wf_alpha = alpha0;
  }
  return m;
}

double uniform01(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

int poisson(std::mt19937_64& eng, double mean) {
  if (mean <= 0.0) return 0;
  const double u = uniform01(eng);
  double p = std::exp(-mean);
  double cdf = p;
  int k = 0;
  while (u > cdf && k < 10000) {
    ++k;
    p *= mean / k;
    cdf += p;
  }
  return k;
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t path, std::uint32_t which) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32), which};
  return std::mt19937_64(seq);
}

struct WorkerOut {
  std::vector<JumpEvent> events;
  std::int64_t substeps = 0;
  std::int64_t over = 0;
  double max_violation = 0.0;
};

class PathRunner {
 public:
  PathRunner(const Model& m, const SimConfig& cfg, const std::vector<double>& step_sizes, const std::vector<char>& save,
             PathSet& out, WorkerOut& wo)
      : m_(m), cfg_(cfg), steps_(step_sizes), save_(save), out_(out), wo_(wo) {
    pw_.nv = m.nf;
    pw_.width = m.maxdeg + 1;
    pw_.pw.assign(static_cast<std::size_t>(pw_.nv * pw_.width), 1.0);
    bound_ = 5.0 * m.scale * std::sqrt(cfg.dt);
  }

  void run(int path) {
    const bool negate = cfg_.antithetic && (path % 2 == 1);
    const std::uint64_t gauss_key = cfg_.antithetic ? static_cast<std::uint64_t>(path / 2) : static_cast<std::uint64_t>(path);
    std::mt19937_64 geng = stream(cfg_.seed, gauss_key, 0);
    std::mt19937_64 jeng = stream(cfg_.seed, static_cast<std::uint64_t>(path), 1);
    std::normal_distribution<double> normal;
    std::vector<double> x = cfg_.x0;
    std::size_t slot = 0;
    store(path, slot++, x);
    double t = 0.0;
    std::int64_t jumps = 0;
    const int d = m_.d;
    std::vector<double> xpre(static_cast<std::size_t>(d)), drift(static_cast<std::size_t>(d)), z(static_cast<std::size_t>(d));
    std::vector<double> lam(m_.jumps.size());
    Eigen::MatrixXd A(d, d);
    for (std::size_t s = 0; s < steps_.size(); ++s) {
      double remaining = steps_[s];
      std::int64_t sub = 0;
      while (remaining > 1e-15 * cfg_.dt) {
        if (++sub > 1000000) throw Error(ErrorCode::ExplodedIntensity, "more than 1e6 substeps in one step at t=" + std::to_string(t));
        pw_.set(x.data());
        double rate = 0.0;
        for (std::size_t j = 0; j < m_.jumps.size(); ++j) {
          const CJump& cj = m_.jumps[j];
          const double den = pw_.eval(cj.den);
          lam[j] = std::abs(den) <= cj.den_tol ? 0.0 : std::max(0.0, pw_.eval(cj.num) / den);
          rate += lam[j] * cj.mass;
        }
        double h = remaining;
        if (rate * h > cfg_.max_jump_budget) h = cfg_.max_jump_budget / rate;
        if (cfg_.boundary_sigmas > 0.0) h = std::min(h, std::max(boundary_step(x), cfg_.min_substep * cfg_.dt));
        xpre = x;
        for (int i = 0; i < d; ++i) {
          double v = pw_.eval(m_.b[static_cast<std::size_t>(i)]);
          for (std::size_t j = 0; j < m_.jumps.size(); ++j)
            if (lam[j] != 0.0) v -= lam[j] * pw_.eval(m_.jumps[j].comp[static_cast<std::size_t>(i)]);
          drift[static_cast<std::size_t>(i)] = v;
        }
        diffusion(xpre, h, geng, normal, negate, A, z);
        for (std::size_t j = 0; j < m_.jumps.size(); ++j) {
          if (lam[j] == 0.0) continue;
          const CJump& cj = m_.jumps[j];
          const int n = poisson(jeng, lam[j] * cj.mass * h);
          for (int e = 0; e < n; ++e) {
            const double u = uniform01(jeng) * cj.mass;
            const auto a = static_cast<std::size_t>(std::upper_bound(cj.cum.begin(), cj.cum.end(), u) - cj.cum.begin());
            const auto& g = cj.atoms[std::min(a, cj.atoms.size() - 1)];
            pw_.set(x.data());
            JumpEvent ev;
            if (cfg_.record_jumps) {
              ev.path = path;
              ev.time = t + h;
              ev.pre = x;
              ev.displacement.resize(static_cast<std::size_t>(d));
            }
            for (int i = 0; i < d; ++i) {
              const double dx = pw_.eval(g[static_cast<std::size_t>(i)]);
              x[static_cast<std::size_t>(i)] += dx;
              if (cfg_.record_jumps) ev.displacement[static_cast<std::size_t>(i)] = dx;
            }
            ++jumps;
            if (cfg_.record_jumps) wo_.events.push_back(std::move(ev));
          }
        }
        for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] += drift[static_cast<std::size_t>(i)] * h + z[static_cast<std::size_t>(i)];
        project(x);
        t += h;
        remaining -= h;
        ++wo_.substeps;
      }
      if (save_[s]) store(path, slot++, x);
    }
    out_.jump_counts[static_cast<std::size_t>(path)] = jumps;
  }

 private:
  void diffusion(const std::vector<double>& x, double h, std::mt19937_64& geng, std::normal_distribution<double>& normal,
                 bool negate, Eigen::MatrixXd& A, std::vector<double>& z) {
    const int d = m_.d;
    const double sq = std::sqrt(h);
    if (m_.space.is_interval()) {
      double a = pw_.eval(m_.a[0]);
      for (const auto& pc : m_.poles)
        if (std::abs(pw_.eval(pc.zero_set)) < 1e-8) a += pw_.eval(pc.matrix[0]);
      double g = normal(geng);
      if (negate) g = -g;
      z[0] = std::sqrt(std::max(a, 0.0)) * sq * g;
      return;
    }
    std::vector<double> g(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) g[static_cast<std::size_t>(k)] = negate ? -normal(geng) : normal(geng);
    if (m_.wf_alpha >= 0.0) {
      // z_i = sqrt(alpha) sum_k sqrt(x_k)(delta_ik - x_i) g_k
      double s = 0.0;
      std::vector<double> r(static_cast<std::size_t>(d));
      for (int k = 0; k < d; ++k) {
        r[static_cast<std::size_t>(k)] = std::sqrt(std::max(x[static_cast<std::size_t>(k)], 0.0)) * g[static_cast<std::size_t>(k)];
        s += r[static_cast<std::size_t>(k)];
      }
      const double f = std::sqrt(m_.wf_alpha) * sq;
      for (int i = 0; i < d; ++i) z[static_cast<std::size_t>(i)] = f * (r[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)] * s);
      return;
    }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) A(i, j) = pw_.eval(m_.a[static_cast<std::size_t>(i * d + j)]);
    for (const auto& pc : m_.poles)
      if (std::abs(pw_.eval(pc.zero_set)) < 1e-8)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) A(i, j) += pw_.eval(pc.matrix[static_cast<std::size_t>(i * d + j)]);
    const Eigen::MatrixXd S = sqrt_psd(A, 1e-10 * m_.scale);
    for (int i = 0; i < d; ++i) {
      double v = 0.0;
      for (int k = 0; k < d; ++k) v += S(i, k) * g[static_cast<std::size_t>(k)];
      z[static_cast<std::size_t>(i)] = v * sq;
    }
  }

  // longest h with sqrt(a_ii h) <= dist_i / boundary_sigmas for every i
  double boundary_step(const std::vector<double>& x) {
    double h = INFINITY;
    const double k2 = cfg_.boundary_sigmas * cfg_.boundary_sigmas;
    const int d = m_.d;
    for (int i = 0; i < d; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      double a = 0.0;
      if (m_.space.is_interval()) {
        a = pw_.eval(m_.a[0]);
      } else if (m_.wf_alpha >= 0.0) {
        a = m_.wf_alpha * x[ui] * (1.0 - x[ui]);
      } else {
        a = pw_.eval(m_.a[static_cast<std::size_t>(i * d + i)]);
      }
      if (!(a > 0.0)) continue;
      const double dist = m_.space.is_interval() ? std::min(x[0], 1.0 - x[0]) : x[ui];
      h = std::min(h, dist * dist / (k2 * a));
    }
    return h;
  }

  void project(std::vector<double>& x) {
    double viol = 0.0;
    if (m_.space.is_interval()) {
      viol = std::max({0.0, -x[0], x[0] - 1.0});
      x[0] = std::clamp(x[0], 0.0, 1.0);
    } else {
      double sum = 0.0;
      for (double& v : x) {
        viol = std::max(viol, -v);
        v = std::max(v, 0.0);
        sum += v;
      }
      for (double& v : x) v /= sum;
    }
    wo_.max_violation = std::max(wo_.max_violation, viol);
    if (viol > bound_) ++wo_.over;
  }

  void store(int path, std::size_t slot, const std::vector<double>& x) {
    const std::size_t base = (static_cast<std::size_t>(path) * out_.times.size() + slot) * static_cast<std::size_t>(m_.d);
    std::copy(x.begin(), x.end(), out_.states.begin() + static_cast<std::ptrdiff_t>(base));
  }

  const Model& m_;
  const SimConfig& cfg_;
  const std::vector<double>& steps_;
  const std::vector<char>& save_;
  PathSet& out_;
  WorkerOut& wo_;
  Powers pw_;
  double bound_ = 0.0;
};

}  // namespace

PathSet simulate(const LevyTriplet& triplet, const SimConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw Error(ErrorCode::OutOfRange, "dt must be > 0");
  if (cfg.n_paths < 1) throw Error(ErrorCode::OutOfRange, "n_paths must be >= 1");
  if (!(cfg.T >= 0.0)) throw Error(ErrorCode::OutOfRange, "T must be >= 0");
  if (cfg.save_every < 1) throw Error(ErrorCode::OutOfRange, "save_every must be >= 1");
  if (cfg.antithetic && cfg.n_paths % 2 != 0) throw Error(ErrorCode::OutOfRange, "antithetic sampling needs an even path count");
  if (!(cfg.max_jump_budget > 0.0)) throw Error(ErrorCode::OutOfRange, "max_jump_budget must be > 0");
  if (!(cfg.boundary_sigmas >= 0.0)) throw Error(ErrorCode::OutOfRange, "boundary_sigmas must be >= 0");
  if (!(cfg.min_substep > 0.0 && cfg.min_substep <= 1.0)) throw Error(ErrorCode::OutOfRange, "min_substep must be in (0, 1]");
  require_in_state_space(triplet.space, cfg.x0, cfg.boundary_tol);
  const ValidationReport rep = validate(triplet, 50);
  if (!rep.ok()) {
    const auto& v = rep.violations.front();
    throw Error(ErrorCode::InvalidTriplet, v.condition + " at " + v.location);
  }
  const Model m = compile_model(triplet);

  std::vector<double> steps;
  const auto n_full = static_cast<std::int64_t>(std::floor(cfg.T / cfg.dt + 1e-9));
  for (std::int64_t k = 0; k < n_full; ++k) steps.push_back(cfg.dt);
  const double rest = cfg.T - static_cast<double>(n_full) * cfg.dt;
  if (rest > 1e-9 * cfg.dt) steps.push_back(rest);
  PathSet out;
  out.n_paths = cfg.n_paths;
  out.coords = m.d;
  out.antithetic = cfg.antithetic;
  out.times.push_back(0.0);
  std::vector<char> save(steps.size(), 0);
  double t = 0.0;
  for (std::size_t s = 0; s < steps.size(); ++s) {
    t = (s + 1 == steps.size() && rest > 1e-9 * cfg.dt) ? cfg.T : static_cast<double>(s + 1) * cfg.dt;
    if ((s + 1) % static_cast<std::size_t>(cfg.save_every) == 0 || s + 1 == steps.size()) {
      save[s] = 1;
      out.times.push_back(t);
    }
  }
  std::vector<double> x0 = cfg.x0;
  out.states.assign(static_cast<std::size_t>(cfg.n_paths) * out.times.size() * static_cast<std::size_t>(m.d), 0.0);
  out.jump_counts.assign(static_cast<std::size_t>(cfg.n_paths), 0);

  const int workers = std::min(worker_count(cfg.threads), cfg.n_paths);
  std::vector<WorkerOut> outs(static_cast<std::size_t>(workers));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  auto work = [&](int w) {
    try {
      PathRunner runner(m, cfg, steps, save, out, outs[static_cast<std::size_t>(w)]);
      const int lo = static_cast<int>(static_cast<std::int64_t>(cfg.n_paths) * w / workers);
      const int hi = static_cast<int>(static_cast<std::int64_t>(cfg.n_paths) * (w + 1) / workers);
      for (int p = lo; p < hi; ++p) runner.run(p);
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& wo : outs) {
    out.total_substeps += wo.substeps;
    out.substeps_over_bound += wo.over;
    out.max_violation = std::max(out.max_violation, wo.max_violation);
    for (auto& ev : wo.events) out.jumps.push_back(std::move(ev));
  }
  return out;
}

std::pair<double, double> empirical_moment(const PathSet& paths, const Polynomial& p, double t) {
  const std::size_t ti = paths.time_index(t);
  const StateSpace& s = p.space();
  if (s.coords() != paths.coords) throw Error(ErrorCode::SpaceMismatch, "polynomial and paths live on different spaces");
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(paths.n_paths));
  for (int path = 0; path < paths.n_paths; ++path) vals.push_back(p.eval_point(paths.state(path, ti)));
  if (paths.antithetic) {
    std::vector<double> pairs;
    for (std::size_t i = 0; i + 1 < vals.size(); i += 2) pairs.push_back(0.5 * (vals[i] + vals[i + 1]));
    vals.swap(pairs);
  }
  const double n = static_cast<double>(vals.size());
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : vals) ss += (v - mean) * (v - mean);
  const double se = vals.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return {mean, se};
}

}  // namespace pjd
