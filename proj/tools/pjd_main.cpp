// pjd: command-line front end over the core library.
//
// Exit codes: 0 ok, 1 domain or validation failure, 2 parse error,
// 3 unsupported or unclassifiable.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pjd/classify.hpp"
#include "pjd/csv.hpp"
#include "pjd/error.hpp"
#include "pjd/expr.hpp"
#include "pjd/generator.hpp"
#include "pjd/moments.hpp"
#include "pjd/recovery.hpp"
#include "pjd/simulate.hpp"
#include "pjd/spec_io.hpp"
#include "pjd/spt.hpp"
#include "pjd/validate.hpp"

namespace {

using namespace pjd;

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse:
      return 2;
    case ErrorCode::Type4Unsupported:
    case ErrorCode::UnsupportedForSimulation:
    case ErrorCode::AssumptionAViolated:
    case ErrorCode::NotAffineJumpSizes:
      return 3;
    default:
      return 1;
  }
}

std::vector<double> number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error(ErrorCode::Parse, "empty entry in list \"" + text + "\"");
    out.push_back(parse_number(item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw Error(ErrorCode::Parse, "empty list");
  return out;
}

// "a:b:n" gives n equally spaced points, otherwise a comma list.
std::vector<double> horizon_list(const std::string& text) {
  if (text.find(':') == std::string::npos) return number_list(text);
  std::stringstream ss(text);
  std::string a, b, n;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n))
    throw Error(ErrorCode::Parse, "grid must be start:stop:count");
  const double lo = parse_number(a), hi = parse_number(b);
  const double cnt = parse_number(n);
  if (cnt < 1 || cnt != std::floor(cnt)) throw Error(ErrorCode::Parse, "grid count must be a positive integer");
  std::vector<double> out;
  const int m = static_cast<int>(cnt);
  for (int i = 0; i < m; ++i) out.push_back(m == 1 ? lo : lo + (hi - lo) * i / (m - 1));
  return out;
}

std::vector<double> start_point(const StateSpace& s, const std::string& text) {
  auto x = number_list(text);
  if (static_cast<int>(x.size()) != s.coords())
    throw Error(ErrorCode::Parse, "--x0 needs " + std::to_string(s.coords()) + " coordinates");
  return x;
}

// Writes to the file named by `path`, or stdout when empty or "-".
template <class F>
void emit(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::Parse, "cannot write " + path);
  write(os);
}

void print_report(const ValidationReport& r) {
  for (const auto& v : r.violations) std::cout << v.condition << " " << v.location << " " << format_number(v.magnitude) << "\n";
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_validate(const std::string& file, int grid) {
  const SpecDocument doc = load_spec(file);
  ValidationReport r;
  if (doc.typed) {
    r = check_domain(*doc.typed);
    if (!r.ok()) {
      print_report(r);
      return 1;
    }
  }
  r.merge(validate(doc.triplet(), grid));
  print_report(r);
  if (r.ok()) std::cout << "ok\n";
  return r.ok() ? 0 : 1;
}

int cmd_classify(const std::string& file) {
  const SpecDocument doc = load_spec(file);
  TypeTag tag;
  try {
    tag = classify(doc.triplet());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AssumptionAViolated) throw;
    std::cout << "unclassifiable\n";
    std::cerr << e.what() << "\n";
    return 3;
  }
  std::cout << tag.name();
  if (tag.spec)
    if (const auto* t2 = std::get_if<IntervalType2>(&*tag.spec)) std::cout << " q=" << format_number(t2->q);
  std::cout << "\n";
  if (tag.spec)
    for (const auto& [k, v] : describe(*tag.spec)) std::cout << k << "=" << v << "\n";
  if (!tag.detail.empty()) std::cerr << tag.detail << "\n";
  return tag.kind == TagKind::Typed ? 0 : 3;
}

struct MomentArgs {
  std::string poly, x0, T, grid, out;
};

int cmd_moment(const std::string& file, const MomentArgs& a) {
  const SpecDocument doc = load_spec(file);
  const Polynomial p = parse_polynomial(a.poly, doc.space);
  const auto x0 = start_point(doc.space, a.x0);
  const LevyTriplet t = doc.triplet();
  if (a.grid.empty()) {
    const double T = parse_number(a.T);
    const double v = moment(t, p, x0, T);
    if (a.out.empty()) {
      std::cout << format_number(v) << "\n";
    } else {
      const double Ts[] = {T}, vs[] = {v};
      emit(a.out, [&](std::ostream& os) { write_moment_csv(os, Ts, vs); });
    }
    return 0;
  }
  const auto horizons = horizon_list(a.grid);
  const auto values = moment_curve(t, p, x0, horizons);
  emit(a.out, [&](std::ostream& os) { write_moment_csv(os, horizons, values); });
  return 0;
}

struct SimArgs {
  std::string x0;
  double T = 1.0, dt = 1e-3, budget = 0.1;
  int paths = 1000, save_every = 1, threads = 0;
  std::uint64_t seed = 1;
  bool antithetic = false;
  std::string out;
};

SimConfig sim_config(const StateSpace& s, const SimArgs& a) {
  if (a.paths <= 0) throw Error(ErrorCode::DomainViolation, "--paths must be positive");
  if (!(a.T > 0.0) || !(a.dt > 0.0)) throw Error(ErrorCode::DomainViolation, "--T and --dt must be positive");
  if (a.save_every <= 0) throw Error(ErrorCode::DomainViolation, "--save-every must be positive");
  SimConfig c;
  c.x0 = start_point(s, a.x0);
  c.T = a.T;
  c.dt = a.dt;
  c.n_paths = a.paths;
  c.seed = a.seed;
  c.max_jump_budget = a.budget;
  c.save_every = a.save_every;
  c.antithetic = a.antithetic;
  c.threads = a.threads;
  return c;
}

void add_sim_flags(CLI::App* cmd, SimArgs& a, bool x0_required) {
  auto* x0 = cmd->add_option("--x0", a.x0, "start point, comma separated ambient coordinates");
  if (x0_required) x0->required();
  cmd->add_option("--T", a.T, "horizon");
  cmd->add_option("--dt", a.dt, "base time step");
  cmd->add_option("--paths", a.paths, "number of paths");
  cmd->add_option("--seed", a.seed, "RNG seed");
  cmd->add_option("--budget", a.budget, "max expected jumps per substep");
  cmd->add_option("--save-every", a.save_every, "store every n-th step");
  cmd->add_option("--threads", a.threads, "worker threads (0 = all, capped by PJD_THREADS)");
  cmd->add_flag("--antithetic", a.antithetic, "antithetic Gaussian pairs");
  cmd->add_option("--out", a.out, "paths CSV (default stdout)");
}

int cmd_simulate(const std::string& file, const SimArgs& a) {
  const SpecDocument doc = load_spec(file);
  const SimConfig cfg = sim_config(doc.space, a);
  const PathSet ps = simulate(doc.triplet(), cfg);
  emit(a.out, [&](std::ostream& os) { write_paths_csv(os, ps); });
  if (ps.substeps_over_bound > 0)
    std::cerr << "warning: " << ps.substeps_over_bound << " substeps projected by more than the tolerance band\n";
  return 0;
}

struct PriceArgs {
  double S = 0.0;
  std::string tenors, curve, payoff, out;
  std::optional<double> x0;
};

Payoff payoff_of(const std::string& name) {
  if (name.empty() || name == "identity") return Payoff::Identity;
  if (name == "square") return Payoff::Square;
  return Payoff::General;
}

int cmd_price(const std::string& file, const PriceArgs& a) {
  const SpecDocument doc = load_spec(file);
  if (!doc.typed || !std::holds_alternative<IntervalType2>(*doc.typed))
    throw Error(ErrorCode::DomainViolation, "price needs a typed interval-type-2 document");
  std::string payoff = a.payoff;
  if (payoff.empty() && doc.recovery) payoff = doc.recovery->payoff;
  RecoveryModel m = make_recovery_model(std::get<IntervalType2>(*doc.typed), payoff_of(payoff));
  if (m.payoff == Payoff::General) m.general = parse_polynomial(payoff, StateSpace::interval());

  std::vector<std::pair<double, double>> pts;
  if (!a.curve.empty()) {
    std::ifstream in(a.curve);
    if (!in) throw Error(ErrorCode::Parse, "cannot read " + a.curve);
    const CsvTable t = read_csv(in);
    if (t.header.size() != 2) throw Error(ErrorCode::Parse, "curve CSV needs columns tenor,P");
    for (const auto& row : t.rows) pts.emplace_back(parse_number(row[0]), parse_number(row[1]));
  } else if (doc.recovery) {
    pts = doc.recovery->curve;
  }
  std::optional<DiscountCurve> curve;
  if (!pts.empty()) {
    curve.emplace(pts);
    for (const auto& w : curve->warnings()) std::cerr << "warning: " << w << "\n";
  }

  std::vector<PriceRow> rows;
  for (double tenor : number_list(a.tenors)) {
    PriceRow r;
    r.tenor = tenor;
    r.F = recovery_forward(m, a.S, tenor, a.x0);
    if (curve) {
      r.P = curve->price(tenor);
    } else if (tenor > 0.0) {
      throw Error(ErrorCode::CurveMissingTenor, "no discount curve given");
    }
    r.Ptilde = r.P * r.F;
    rows.push_back(r);
  }
  emit(a.out, [&](std::ostream& os) { write_price_csv(os, rows); });
  return 0;
}

int cmd_spt(const std::string& file, bool run, const SimArgs& a) {
  const SpecDocument doc = load_spec(file);
  if (!doc.spt) throw Error(ErrorCode::Parse, "document has no spt application section");
  const InteriorReport r = spt_check_interior(*doc.spt);
  for (const auto& m : r.margins)
    std::cout << "margin k=" << m.k + 1 << " j=" << m.j + 1 << " " << format_number(m.margin) << "\n";
  std::cout << (r.ok ? "interior ok" : "interior not guaranteed") << "\n";
  if (run) {
    const SimConfig cfg = sim_config(doc.space, a);
    const PathSet ps = simulate(spt_build(*doc.spt), cfg);
    emit(a.out, [&](std::ostream& os) { write_paths_csv(os, ps); });
  }
  return r.ok ? 0 : 1;
}

int cmd_matrix(const std::string& file, int N, const std::string& out) {
  const SpecDocument doc = load_spec(file);
  const GeneratorMatrix gm = build_matrix(doc.triplet(), N);
  emit(out, [&](std::ostream& os) { gm.write_csv(os); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial jump-diffusions: validation, classification, moments, simulation"};
  app.require_subcommand(1);

  std::string file;
  int grid = 200;
  auto* v = app.add_subcommand("validate", "check a spec file");
  v->add_option("file", file, "spec file")->required();
  v->add_option("--grid", grid, "grid points per dimension");

  auto* c = app.add_subcommand("classify", "recover the type and its parameters");
  c->add_option("file", file, "spec file")->required();

  MomentArgs ma;
  auto* m = app.add_subcommand("moment", "E[p(X_T)] via the matrix exponential");
  m->add_option("file", file, "spec file")->required();
  m->add_option("--poly", ma.poly, "polynomial in x or x1..xd")->required();
  m->add_option("--x0", ma.x0, "start point, comma separated ambient coordinates")->required();
  auto* mT = m->add_option("--T", ma.T, "horizon");
  auto* mG = m->add_option("--T-grid", ma.grid, "horizons: comma list or start:stop:count");
  mT->excludes(mG);
  m->add_option("--out", ma.out, "moment CSV (T,value)");

  SimArgs sa;
  auto* s = app.add_subcommand("simulate", "Euler paths with Poisson jumps");
  s->add_option("file", file, "spec file")->required();
  add_sim_flags(s, sa, true);

  PriceArgs pa;
  auto* p = app.add_subcommand("price", "forward recovery and defaultable bond prices");
  p->add_option("file", file, "spec file with an interval-type-2 model")->required();
  p->add_option("--S", pa.S, "current recovery level")->required();
  p->add_option("--tenors", pa.tenors, "comma separated tenors")->required();
  p->add_option("--curve", pa.curve, "discount curve CSV (tenor,P)");
  p->add_option("--payoff", pa.payoff, "identity, square or a polynomial in x");
  p->add_option("--x0", pa.x0, "state of X for general payoffs");
  p->add_option("--out", pa.out, "price CSV (tenor,P,F,Ptilde)");

  bool spt_run = false;
  SimArgs spa;
  auto* sp = app.add_subcommand("spt", "market-weight model: interior check and optional simulation");
  sp->add_option("file", file, "spec file with an spt application section")->required();
  sp->add_flag("--simulate", spt_run, "also simulate paths");
  add_sim_flags(sp, spa, false);

  int N = 2;
  std::string mout;
  auto* gmx = app.add_subcommand("matrix", "export the generator matrix on Pol_N");
  gmx->add_option("file", file, "spec file")->required();
  gmx->add_option("--N", N, "degree")->check(CLI::NonNegativeNumber);
  gmx->add_option("--out", mout, "CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*v) return cmd_validate(file, grid);
    if (*c) return cmd_classify(file);
    if (*m) {
      if (ma.T.empty() && ma.grid.empty()) throw Error(ErrorCode::Parse, "moment needs --T or --T-grid");
      return cmd_moment(file, ma);
    }
    if (*s) return cmd_simulate(file, sa);
    if (*p) return cmd_price(file, pa);
    if (*sp) {
      if (spt_run && spa.x0.empty()) throw Error(ErrorCode::Parse, "--simulate needs --x0");
      return cmd_spt(file, spt_run, spa);
    }
    if (*gmx) return cmd_matrix(file, N, mout);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
