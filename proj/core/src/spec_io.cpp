#include "pjd/spec_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pjd/error.hpp"
#include "pjd/expr.hpp"

namespace pjd {

using json = nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::Parse, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return parse_number(j.get<std::string>());
    } catch (const Error&) {
      bad(what + ": not a number");
    }
  }
  bad(what + ": expected a number or \"a/b\"");
}

double number_at(const json& j, const char* key) { return number(field(j, key), key); }

int integer(const json& j, const char* key) {
  const double v = number_at(j, key);
  if (v != static_cast<int>(v)) bad(std::string(key) + ": expected an integer");
  return static_cast<int>(v);
}

int coordinate_index(const json& j, const char* key, int d) {
  const int i = integer(j, key);
  if (i < 1 || i > d) bad(std::string(key) + ": expected 1.." + std::to_string(d));
  return i - 1;
}

std::vector<double> vector_of(const json& j, const std::string& what) {
  if (!j.is_array()) bad(what + ": expected an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

Eigen::MatrixXd matrix_of(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) bad(what + ": expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    auto row = vector_of(j[static_cast<std::size_t>(r)], what);
    if (r == 0) m.resize(rows, static_cast<Eigen::Index>(row.size()));
    if (static_cast<Eigen::Index>(row.size()) != m.cols()) bad(what + ": ragged matrix");
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

StateSpace space_of(const json& j) {
  std::string kind;
  int d = 1;
  if (j.is_string()) {
    kind = j.get<std::string>();
  } else {
    kind = field(j, "kind").get<std::string>();
    if (j.contains("d")) d = integer(j, "d");
  }
  if (kind == "interval") return StateSpace::interval();
  if (kind == "simplex") {
    if (d < 2) bad("simplex needs d >= 2");
    return StateSpace::simplex(d);
  }
  bad("unknown space \"" + kind + "\"");
}

Polynomial poly_of(const json& j, const StateSpace& s, const std::string& what) {
  if (j.is_number()) return Polynomial::constant(s, j.get<double>());
  if (j.is_string()) {
    try {
      return parse_polynomial(j.get<std::string>(), s);
    } catch (const Error& e) {
      bad(what + ": " + e.what());
    }
  }
  if (!j.is_array()) bad(what + ": expected an expression or a list of {exponents, coeff}");
  Polynomial amb(StateSpace::euclidean(s.coords()));
  for (const auto& term : j) {
    const auto& e = field(term, "exponents");
    if (!e.is_array() || static_cast<int>(e.size()) != s.coords())
      bad(what + ": exponents need " + std::to_string(s.coords()) + " entries");
    MultiIndex k;
    for (const auto& v : e) {
      if (!v.is_number_integer() || v.get<int>() < 0) bad(what + ": exponents must be nonnegative integers");
      k.push_back(v.get<int>());
    }
    amb.add_term(k, number_at(term, "coeff"));
  }
  return reduce_to_free(s, amb);
}

json poly_json(const Polynomial& p, const StateSpace& s) {
  json out = json::array();
  for (const auto& [k, c] : p.terms()) {
    MultiIndex amb(k);
    amb.resize(static_cast<std::size_t>(s.coords()), 0);
    out.push_back({{"exponents", amb}, {"coeff", c}});
  }
  return out;
}

MeasureRep measure_of(const json& j, int expect_dim, const std::string& what) {
  if (j.contains("atoms")) {
    std::vector<Atom> atoms;
    for (const auto& a : field(j, "atoms")) {
      Atom atom;
      atom.point = vector_of(field(a, "point"), what + " atom point");
      atom.weight = a.contains("weight") ? number_at(a, "weight") : 1.0;
      atoms.push_back(std::move(atom));
    }
    const int dim = j.contains("dim") ? integer(j, "dim") : expect_dim;
    try {
      return MeasureRep::from_atoms(dim, std::move(atoms));
    } catch (const Error& e) {
      bad(what + ": " + e.what());
    }
  }
  if (j.contains("moments")) {
    MomentTable t;
    t.dim = j.contains("dim") ? integer(j, "dim") : expect_dim;
    for (const auto& m : field(j, "moments")) {
      MultiIndex k;
      for (const auto& v : field(m, "k")) {
        if (!v.is_number_integer() || v.get<int>() < 0) bad(what + ": moment index must be nonnegative integers");
        k.push_back(v.get<int>());
      }
      if (static_cast<int>(k.size()) != t.dim) bad(what + ": moment index length differs from dim");
      const auto& v = field(m, "value");
      if (v.is_null()) continue;
      const double x = number(v, what + " moment");
      if (!std::isfinite(x)) continue;
      t.values[k] = x;
    }
    try {
      return MeasureRep::from_moments(std::move(t));
    } catch (const Error& e) {
      bad(what + ": " + e.what());
    }
  }
  if (j.is_object() && j.empty()) return MeasureRep::zero(expect_dim);
  bad(what + ": expected {\"atoms\": ...} or {\"moments\": ...}");
}

json measure_json(const MeasureRep& mu) {
  json out;
  out["dim"] = mu.dim();
  if (mu.is_atomic()) {
    out["atoms"] = json::array();
    for (const auto& a : mu.atoms()) out["atoms"].push_back({{"point", a.point}, {"weight", a.weight}});
    return out;
  }
  out["moments"] = json::array();
  for (const auto& [k, v] : mu.table().values) out["moments"].push_back({{"k", k}, {"value", v}});
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

MeasureRep opt_measure(const json& j, int dim) {
  return j.contains("mu") ? measure_of(j.at("mu"), dim, "mu") : MeasureRep::zero(dim);
}

TypedSpec typed_of(const json& j, const StateSpace& s) {
  const std::string type = field(j, "type").get<std::string>();
  const bool simplex_type = type.rfind("simplex-", 0) == 0;
  if (simplex_type != s.is_simplex()) bad("type " + type + " does not live on " + s.name());
  if (type == "interval-type-0") return IntervalType0{number_at(j, "A"), number_at(j, "kappa"), number_at(j, "theta")};
  if (type == "interval-type-1")
    return IntervalType1{number_at(j, "A"), number_at(j, "kappa"), number_at(j, "theta"), measure_of(field(j, "mu"), 2, "mu")};
  if (type == "interval-type-2") {
    IntervalType2 t{number_at(j, "A"), number_at(j, "kappa"), number_at(j, "theta"), number_at(j, "q"), 0,
                    measure_of(field(j, "mu"), 1, "mu")};
    if (j.contains("side")) t.side = integer(j, "side");
    return t;
  }
  if (type == "interval-type-3") {
    IntervalType3 t;
    t.x_star = number_at(j, "x_star");
    t.kappa = number_at(j, "kappa");
    t.theta = number_at(j, "theta");
    t.A = number_at(j, "A");
    t.q0 = number_at(j, "q0");
    t.q1 = number_at(j, "q1");
    t.q2 = number_at(j, "q2");
    t.mu = measure_of(field(j, "mu"), 1, "mu");
    return t;
  }
  if (type == "interval-type-4") {
    IntervalType4 t;
    const auto al = vector_of(field(j, "alpha"), "alpha");
    if (al.size() != 2) bad("alpha: expected [re, im]");
    t.alpha = {al[0], al[1]};
    t.kappa = number_at(j, "kappa");
    t.theta = number_at(j, "theta");
    t.A = number_at(j, "A");
    t.L = number_at(j, "L");
    t.mu = opt_measure(j, 2);
    return t;
  }
  const int d = s.d;
  const Eigen::MatrixXd alpha = matrix_of(field(j, "alpha"), "alpha");
  const Eigen::MatrixXd B = matrix_of(field(j, "B"), "B");
  if (B.rows() != d || B.cols() != d || alpha.rows() != d || alpha.cols() != d)
    bad("alpha and B must be " + std::to_string(d) + "x" + std::to_string(d));
  if (type == "simplex-type-0") return SimplexType0{alpha, B};
  if (type == "simplex-type-1") return SimplexType1{alpha, B, measure_of(field(j, "mu"), d * d, "mu")};
  if (type == "simplex-type-2") {
    SimplexType2 t;
    t.i = coordinate_index(j, "i", d);
    t.alpha = alpha;
    t.B = B;
    t.q1 = vector_of(field(j, "q1"), "q1");
    t.mu = measure_of(field(j, "mu"), d, "mu");
    return t;
  }
  if (type == "simplex-type-3") {
    SimplexType3 t;
    t.i = coordinate_index(j, "i", d);
    t.j = coordinate_index(j, "j", d);
    t.c = number_at(j, "c");
    t.alpha = alpha;
    t.B = B;
    t.qi = vector_of(field(j, "qi"), "qi");
    t.qj = vector_of(field(j, "qj"), "qj");
    t.mu = measure_of(field(j, "mu"), 1, "mu");
    return t;
  }
  bad("unknown type \"" + type + "\"");
}

json typed_json(const TypedSpec& spec) {
  json out = std::visit(
      overloaded{
          [](const IntervalType0& p) -> json { return {{"A", p.A}, {"kappa", p.kappa}, {"theta", p.theta}}; },
          [](const IntervalType1& p) -> json {
            return {{"A", p.A}, {"kappa", p.kappa}, {"theta", p.theta}, {"mu", measure_json(p.mu)}};
          },
          [](const IntervalType2& p) -> json {
            return {{"A", p.A}, {"kappa", p.kappa}, {"theta", p.theta}, {"q", p.q}, {"side", p.side}, {"mu", measure_json(p.mu)}};
          },
          [](const IntervalType3& p) -> json {
            return {{"x_star", p.x_star}, {"A", p.A},   {"kappa", p.kappa}, {"theta", p.theta},
                    {"q0", p.q0},         {"q1", p.q1}, {"q2", p.q2},       {"mu", measure_json(p.mu)}};
          },
          [](const IntervalType4& p) -> json {
            return {{"alpha", {p.alpha.real(), p.alpha.imag()}}, {"A", p.A}, {"kappa", p.kappa}, {"theta", p.theta},
                    {"L", p.L},                                  {"mu", measure_json(p.mu)}};
          },
          [](const SimplexType0& p) -> json { return {{"alpha", matrix_json(p.alpha)}, {"B", matrix_json(p.B)}}; },
          [](const SimplexType1& p) -> json {
            return {{"alpha", matrix_json(p.alpha)}, {"B", matrix_json(p.B)}, {"mu", measure_json(p.mu)}};
          },
          [](const SimplexType2& p) -> json {
            return {{"i", p.i + 1}, {"alpha", matrix_json(p.alpha)}, {"B", matrix_json(p.B)}, {"q1", p.q1}, {"mu", measure_json(p.mu)}};
          },
          [](const SimplexType3& p) -> json {
            return {{"i", p.i + 1},   {"j", p.j + 1}, {"c", p.c},
                    {"alpha", matrix_json(p.alpha)}, {"B", matrix_json(p.B)}, {"qi", p.qi},
                    {"qj", p.qj},     {"mu", measure_json(p.mu)}};
          },
      },
      spec);
  out["type"] = type_name(spec);
  return out;
}

PolyMatrix poly_matrix_of(const json& j, const StateSpace& s, const std::string& what) {
  const int n = s.coords();
  if (!j.is_array() || static_cast<int>(j.size()) != n) bad(what + ": expected " + std::to_string(n) + " rows");
  PolyMatrix m = zero_poly_matrix(s, n);
  for (int r = 0; r < n; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) bad(what + ": expected " + std::to_string(n) + " columns");
    for (int c = 0; c < n; ++c)
      m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = poly_of(row[static_cast<std::size_t>(c)], s, what);
  }
  return m;
}

json poly_matrix_json(const PolyMatrix& m, const StateSpace& s) {
  json out = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& p : row) r.push_back(poly_json(p, s));
    out.push_back(r);
  }
  return out;
}

LevyTriplet raw_of(const json& j, const StateSpace& s) {
  LevyTriplet t(s);
  const int n = s.coords();
  t.a = poly_matrix_of(field(j, "a"), s, "a");
  const auto& b = field(j, "b");
  if (!b.is_array() || static_cast<int>(b.size()) != n) bad("b: expected " + std::to_string(n) + " entries");
  for (int i = 0; i < n; ++i) t.b[static_cast<std::size_t>(i)] = poly_of(b[static_cast<std::size_t>(i)], s, "b");
  if (j.contains("poles"))
    for (const auto& p : j.at("poles"))
      t.poles.push_back({poly_of(field(p, "zero_set"), s, "zero_set"), poly_matrix_of(field(p, "matrix"), s, "pole matrix")});
  if (j.contains("jumps")) {
    for (const auto& jj : j.at("jumps")) {
      JumpSpec js;
      const auto& lam = field(jj, "lambda");
      Polynomial num = poly_of(field(lam, "num"), s, "lambda num");
      Polynomial den = lam.contains("den") ? poly_of(lam.at("den"), s, "lambda den") : Polynomial::constant(s, 1.0);
      std::optional<Polynomial> pf;
      if (lam.contains("pole_factor")) pf = poly_of(lam.at("pole_factor"), s, "pole_factor");
      try {
        js.lambda = RationalFn(num, den, pf);
      } catch (const Error& e) {
        bad(std::string("lambda: ") + e.what());
      }
      const auto& g = field(jj, "gamma");
      const auto& coeff = field(g, "coeff");
      if (!coeff.is_array() || static_cast<int>(coeff.size()) != n) bad("gamma coeff: expected " + std::to_string(n) + " rows");
      const int ny = static_cast<int>(coeff[0].size());
      if (ny < 1) bad("gamma coeff: at least one jump variable");
      js.gamma = AffineJumpMap(s, ny);
      for (int i = 0; i < n; ++i) {
        const auto& row = coeff[static_cast<std::size_t>(i)];
        if (static_cast<int>(row.size()) != ny) bad("gamma coeff: ragged rows");
        for (int m = 0; m < ny; ++m)
          js.gamma.coeff[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] = poly_of(row[static_cast<std::size_t>(m)], s, "gamma");
      }
      if (g.contains("offset")) {
        const auto& off = g.at("offset");
        if (!off.is_array() || static_cast<int>(off.size()) != n) bad("gamma offset: expected " + std::to_string(n) + " entries");
        for (int i = 0; i < n; ++i) js.gamma.offset[static_cast<std::size_t>(i)] = poly_of(off[static_cast<std::size_t>(i)], s, "gamma offset");
      }
      js.mu = measure_of(field(jj, "mu"), ny, "mu");
      if (js.mu.dim() != ny) bad("mu dimension differs from the number of jump variables");
      t.jumps.push_back(std::move(js));
    }
  }
  return t;
}

json raw_json(const LevyTriplet& t) {
  const StateSpace& s = t.space;
  json out;
  out["a"] = poly_matrix_json(t.a, s);
  out["b"] = json::array();
  for (const auto& p : t.b) out["b"].push_back(poly_json(p, s));
  out["poles"] = json::array();
  for (const auto& pc : t.poles) out["poles"].push_back({{"zero_set", poly_json(pc.zero_set, s)}, {"matrix", poly_matrix_json(pc.matrix, s)}});
  out["jumps"] = json::array();
  for (const auto& j : t.jumps) {
    json lam{{"num", poly_json(j.lambda.num, s)}, {"den", poly_json(j.lambda.den, s)}};
    if (j.lambda.pole_factor) lam["pole_factor"] = poly_json(*j.lambda.pole_factor, s);
    json off = json::array();
    for (const auto& p : j.gamma.offset) off.push_back(poly_json(p, s));
    json coeff = json::array();
    for (const auto& row : j.gamma.coeff) {
      json r = json::array();
      for (const auto& p : row) r.push_back(poly_json(p, s));
      coeff.push_back(r);
    }
    out["jumps"].push_back({{"lambda", lam}, {"gamma", {{"offset", off}, {"coeff", coeff}}}, {"mu", measure_json(j.mu)}});
  }
  return out;
}

SPTModel spt_of(const json& j) {
  SPTModel m;
  m.d = integer(j, "d");
  m.beta = number_at(j, "beta");
  const auto& q = field(j, "q");
  if (!q.is_array()) bad("spt q: expected rows");
  for (const auto& row : q) m.q.push_back(vector_of(row, "spt q"));
  const auto& mu = field(j, "mu");
  if (!mu.is_array()) bad("spt mu: expected one measure per coordinate");
  for (const auto& mj : mu) m.mu.push_back(measure_of(mj, m.d, "spt mu"));
  return m;
}

json spt_json(const SPTModel& m) {
  json out{{"d", m.d}, {"beta", m.beta}, {"q", m.q}};
  out["mu"] = json::array();
  for (const auto& mu : m.mu) out["mu"].push_back(measure_json(mu));
  return out;
}

}  // namespace

LevyTriplet SpecDocument::triplet() const {
  if (typed) return construct(*typed);
  if (raw) return *raw;
  if (spt) return spt_build(*spt);
  throw Error(ErrorCode::Parse, "document has no model");
}

SpecDocument parse_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    bad(std::string("malformed document: ") + e.what());
  }
  try {
    SpecDocument doc;
    const auto& v = field(j, "version");
    doc.version = v.is_string() ? v.get<std::string>() : v.dump();
    if (doc.version != "1") bad("unsupported version " + doc.version);
    doc.space = space_of(field(j, "space"));
    if (j.contains("typed")) doc.typed = typed_of(j.at("typed"), doc.space);
    if (j.contains("raw")) doc.raw = raw_of(j.at("raw"), doc.space);
    if (j.contains("application")) {
      const auto& app = j.at("application");
      if (app.contains("recovery")) {
        const auto& r = app.at("recovery");
        RecoveryApp ra;
        if (r.contains("payoff")) ra.payoff = r.at("payoff").get<std::string>();
        if (r.contains("curve"))
          for (const auto& pt : r.at("curve")) {
            const auto v2 = vector_of(pt, "curve point");
            if (v2.size() != 2) bad("curve points are [tenor, price]");
            ra.curve.emplace_back(v2[0], v2[1]);
          }
        doc.recovery = ra;
      }
      if (app.contains("spt")) {
        doc.spt = spt_of(app.at("spt"));
        if (!doc.space.is_simplex() || doc.space.d != doc.spt->d) bad("spt application needs a simplex space of the same d");
      }
    }
    const int models = (doc.typed ? 1 : 0) + (doc.raw ? 1 : 0);
    if (models > 1) bad("document has both typed and raw sections");
    if (models == 0 && !doc.spt) bad("document needs a typed or raw section");
    if (j.contains("metadata") && j.at("metadata").is_object())
      for (const auto& [k, v] : j.at("metadata").items()) doc.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    return doc;
  } catch (const json::exception& e) {
    bad(std::string("malformed document: ") + e.what());
  }
}

SpecDocument load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string dump_spec(const SpecDocument& doc) {
  json j;
  j["version"] = doc.version;
  if (doc.space.is_simplex())
    j["space"] = {{"kind", "simplex"}, {"d", doc.space.d}};
  else
    j["space"] = {{"kind", "interval"}};
  if (doc.typed) j["typed"] = typed_json(*doc.typed);
  if (doc.raw) j["raw"] = raw_json(*doc.raw);
  if (doc.recovery) {
    json r{{"payoff", doc.recovery->payoff}};
    if (!doc.recovery->curve.empty()) {
      r["curve"] = json::array();
      for (const auto& [t, p] : doc.recovery->curve) r["curve"].push_back({t, p});
    }
    j["application"]["recovery"] = r;
  }
  if (doc.spt) j["application"]["spt"] = spt_json(*doc.spt);
  if (!doc.metadata.empty()) j["metadata"] = doc.metadata;
  return j.dump(2) + "\n";
}

}  // namespace pjd
