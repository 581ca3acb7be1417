#include "pjd/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pjd/error.hpp"

namespace pjd {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::NotPolynomial: return "NotPolynomial";
    case ErrorCode::MomentUnavailable: return "MomentUnavailable";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::BoundaryViolation: return "BoundaryViolation";
    case ErrorCode::Type4Unsupported: return "Type4Unsupported";
    case ErrorCode::NotAffineJumpSizes: return "NotAffineJumpSizes";
    case ErrorCode::AssumptionAViolated: return "AssumptionAViolated";
    case ErrorCode::InvalidTriplet: return "InvalidTriplet";
    case ErrorCode::DegenerateGammas: return "DegenerateGammas";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::UnsupportedForSimulation: return "UnsupportedForSimulation";
    case ErrorCode::ExplodedIntensity: return "ExplodedIntensity";
    case ErrorCode::TooIndefinite: return "TooIndefinite";
    case ErrorCode::TimeNotOnGrid: return "TimeNotOnGrid";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::CurveMissingTenor: return "CurveMissingTenor";
    case ErrorCode::LogMomentUndefined: return "LogMomentUndefined";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

StateSpace StateSpace::simplex(int d) {
  if (d < 2) throw Error(ErrorCode::DomainViolation, "simplex requires d >= 2");
  return {Kind::Simplex, d};
}

StateSpace StateSpace::euclidean(int n) {
  if (n < 0) throw Error(ErrorCode::DomainViolation, "negative variable count");
  return {Kind::Euclidean, n};
}

std::string StateSpace::name() const {
  switch (kind) {
    case Kind::Interval: return "interval";
    case Kind::Simplex: return "simplex(" + std::to_string(d) + ")";
    case Kind::Euclidean: return "euclidean(" + std::to_string(d) + ")";
  }
  return "?";
}

int total_degree(const MultiIndex& k) noexcept { return std::accumulate(k.begin(), k.end(), 0); }

bool GradedLexLess::operator()(const MultiIndex& a, const MultiIndex& b) const noexcept {
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da < db;
  // lexicographically descending within a degree
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

void enumerate_exact(int nvars, int degree, int var, MultiIndex& current,
                     std::vector<MultiIndex>& out) {
  if (var == nvars - 1) {
    current[var] = degree;
    out.push_back(current);
    return;
  }
  for (int k = degree; k >= 0; --k) {
    current[var] = k;
    enumerate_exact(nvars, degree - k, var + 1, current, out);
  }
  current[var] = 0;
}

}  // namespace

std::vector<MultiIndex> enumerate_indices(int nvars, int degree) {
  std::vector<MultiIndex> out;
  if (degree < 0) return out;
  if (nvars == 0) {
    out.emplace_back();
    return out;
  }
  MultiIndex current(static_cast<std::size_t>(nvars), 0);
  for (int n = 0; n <= degree; ++n) enumerate_exact(nvars, n, 0, current, out);
  return out;
}

std::vector<MultiIndex> enumerate_basis(const StateSpace& space, int degree) {
  return enumerate_indices(space.free_vars(), degree);
}

Polynomial Polynomial::constant(StateSpace space, double c) {
  Polynomial p(space);
  p.add_term(MultiIndex(static_cast<std::size_t>(space.free_vars()), 0), c);
  return p;
}

Polynomial Polynomial::variable(StateSpace space, int var, double coeff) {
  if (var < 0 || var >= space.free_vars())
    throw Error(ErrorCode::SpaceMismatch, "variable index out of range for " + space.name());
  MultiIndex k(static_cast<std::size_t>(space.free_vars()), 0);
  k[static_cast<std::size_t>(var)] = 1;
  Polynomial p(space);
  p.add_term(k, coeff);
  return p;
}

Polynomial Polynomial::monomial(StateSpace space, MultiIndex exponents, double coeff) {
  if (static_cast<int>(exponents.size()) != space.free_vars())
    throw Error(ErrorCode::SpaceMismatch, "multi-index length does not match " + space.name());
  Polynomial p(space);
  p.add_term(exponents, coeff);
  return p;
}

Polynomial Polynomial::coordinate(StateSpace space, int i) {
  if (space.is_simplex() && i == space.d - 1) {
    Polynomial p = constant(space, 1.0);
    for (int v = 0; v < space.free_vars(); ++v) p -= variable(space, v);
    return p;
  }
  return variable(space, i);
}

int Polynomial::degree() const noexcept {
  if (terms_.empty()) return 0;
  return total_degree(terms_.rbegin()->first);
}

double Polynomial::coefficient(const MultiIndex& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::max_abs_coefficient() const noexcept {
  double m = 0.0;
  for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void Polynomial::add_term(const MultiIndex& k, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::eval(std::span<const double> x) const {
  const int n = nvars();
  if (static_cast<int>(x.size()) < n)
    throw Error(ErrorCode::SpaceMismatch, "evaluation point has too few coordinates");
  double total = 0.0;
  for (const auto& [k, c] : terms_) {
    double term = c;
    for (int i = 0; i < n; ++i) {
      for (int e = 0; e < k[static_cast<std::size_t>(i)]; ++e) term *= x[static_cast<std::size_t>(i)];
    }
    total += term;
  }
  return total;
}

Polynomial Polynomial::partial(int var) const {
  if (var < 0 || var >= nvars()) throw Error(ErrorCode::SpaceMismatch, "partial: variable out of range");
  Polynomial out(space_);
  for (const auto& [k, c] : terms_) {
    const int e = k[static_cast<std::size_t>(var)];
    if (e == 0) continue;
    MultiIndex kk = k;
    kk[static_cast<std::size_t>(var)] = e - 1;
    out.add_term(kk, c * e);
  }
  return out;
}

Polynomial Polynomial::pow(int n) const {
  if (n < 0) throw Error(ErrorCode::DomainViolation, "negative polynomial power");
  Polynomial result = constant(space_, 1.0);
  Polynomial base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

Polynomial Polynomial::chopped(double rel_tol) const {
  const double cut = rel_tol * max_abs_coefficient();
  Polynomial out(space_);
  for (const auto& [k, c] : terms_)
    if (std::abs(c) > cut) out.terms_.emplace(k, c);
  return out;
}

void Polynomial::require_same_space(const Polynomial& other) const {
  if (!(space_ == other.space_))
    throw Error(ErrorCode::SpaceMismatch, space_.name() + " vs " + other.space_.name());
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  require_same_space(other);
  for (const auto& [k, c] : other.terms_) add_term(k, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  require_same_space(other);
  for (const auto& [k, c] : other.terms_) add_term(k, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= s;
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  return out *= -1.0;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.require_same_space(b);
  Polynomial out(a.space_);
  const std::size_t n = static_cast<std::size_t>(a.nvars());
  MultiIndex k(n, 0);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      for (std::size_t i = 0; i < n; ++i) k[i] = ka[i] + kb[i];
      out.add_term(k, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::operator+(double c) const {
  Polynomial out = *this;
  out.add_term(MultiIndex(static_cast<std::size_t>(nvars()), 0), c);
  return out;
}

bool Polynomial::approx_equal(const Polynomial& other, double tol) const {
  require_same_space(other);
  Polynomial diff = *this - other;
  return diff.max_abs_coefficient() <= tol;
}

namespace {

std::string variable_name(const StateSpace& space, int i) {
  if (space.is_interval()) return "x";
  if (space.kind == StateSpace::Kind::Euclidean && space.d == 1) return "x";
  return "x" + std::to_string(i + 1);
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    std::string mono;
    for (int i = 0; i < nvars(); ++i) {
      const int e = k[static_cast<std::size_t>(i)];
      if (e == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += variable_name(space_, i);
      if (e > 1) mono += "^" + std::to_string(e);
    }
    double mag = std::abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mono.empty()) {
      os << format_number(mag);
    } else if (mag == 1.0) {
      os << mono;
    } else {
      os << format_number(mag) << "*" << mono;
    }
    first = false;
  }
  return os.str();
}

Polynomial reduce_to_free(const StateSpace& space, const Polynomial& ambient) {
  if (ambient.nvars() != space.coords())
    throw Error(ErrorCode::SpaceMismatch,
                "reduce_to_free expects a polynomial over " + std::to_string(space.coords()) +
                    " coordinates, got " + std::to_string(ambient.nvars()));
  Polynomial out(space);
  if (!space.is_simplex()) {
    for (const auto& [k, c] : ambient.terms()) out.add_term(k, c);
    return out;
  }
  const int nf = space.free_vars();
  const Polynomial last = Polynomial::coordinate(space, space.d - 1);
  std::vector<Polynomial> last_powers{Polynomial::constant(space, 1.0)};
  for (const auto& [k, c] : ambient.terms()) {
    const int e = k[static_cast<std::size_t>(nf)];
    while (static_cast<int>(last_powers.size()) <= e) last_powers.push_back(last_powers.back() * last);
    MultiIndex head(k.begin(), k.begin() + nf);
    Polynomial term = Polynomial::monomial(space, head, c) * last_powers[static_cast<std::size_t>(e)];
    out += term;
  }
  return out;
}

Polynomial embed(const Polynomial& p, const StateSpace& target, int offset) {
  if (offset < 0 || offset + p.nvars() > target.free_vars())
    throw Error(ErrorCode::SpaceMismatch, "embed: target space too small");
  Polynomial out(target);
  MultiIndex k(static_cast<std::size_t>(target.free_vars()), 0);
  for (const auto& [kp, c] : p.terms()) {
    std::fill(k.begin(), k.end(), 0);
    for (int i = 0; i < p.nvars(); ++i) k[static_cast<std::size_t>(offset + i)] = kp[static_cast<std::size_t>(i)];
    out.add_term(k, c);
  }
  return out;
}

namespace {

// Leading term in graded lexicographic order: the highest degree block, and
// within it the lexicographically largest exponent, which is the first entry
// of that block in GradedLexLess order.
Polynomial::TermMap::const_iterator leading_term(const Polynomial::TermMap& terms) {
  const int top = total_degree(terms.rbegin()->first);
  auto it = terms.rbegin();
  auto lead = terms.end();
  for (; it != terms.rend() && total_degree(it->first) == top; ++it) lead = std::prev(it.base());
  return lead;
}

bool divides(const MultiIndex& a, const MultiIndex& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

}  // namespace

DivisionResult divide(const Polynomial& num, const Polynomial& den) {
  if (!(num.space() == den.space())) throw Error(ErrorCode::SpaceMismatch, "divide: operand spaces differ");
  if (den.is_zero()) throw Error(ErrorCode::NotDivisible, "division by the zero polynomial");
  const StateSpace space = num.space();
  const auto lead_den = leading_term(den.terms());
  const MultiIndex& lead_k = lead_den->first;
  const double lead_c = lead_den->second;

  Polynomial p = num;
  Polynomial q(space);
  Polynomial r(space);
  MultiIndex shift(lead_k.size(), 0);
  while (!p.is_zero()) {
    const auto lt = leading_term(p.terms());
    const MultiIndex k = lt->first;
    const double c = lt->second;
    if (divides(lead_k, k)) {
      for (std::size_t i = 0; i < k.size(); ++i) shift[i] = k[i] - lead_k[i];
      const double factor = c / lead_c;
      q.add_term(shift, factor);
      p -= Polynomial::monomial(space, shift, factor) * den;
      // the leading monomial cancels exactly in exact arithmetic
      Polynomial cleaned(space);
      for (const auto& [kk, cc] : p.terms())
        if (kk != k) cleaned.add_term(kk, cc);
      p = std::move(cleaned);
    } else {
      r.add_term(k, c);
      p.add_term(k, -c);
    }
  }
  return {q, r};
}

Polynomial divide_exact(const Polynomial& num, const Polynomial& den, double tol) {
  if (num.is_zero()) {
    if (den.is_zero()) throw Error(ErrorCode::NotDivisible, "division by the zero polynomial");
    return Polynomial(num.space());
  }
  auto [q, r] = divide(num, den);
  const double scale = num.max_abs_coefficient();
  const double rem = r.max_abs_coefficient();
  if (rem > tol * scale) {
    std::ostringstream os;
    os << "remainder " << rem << " exceeds " << tol << " * " << scale << " (" << num.to_string()
       << " / " << den.to_string() << ")";
    throw Error(ErrorCode::NotDivisible, os.str());
  }
  return q.chopped(1e-14);
}

}  // namespace pjd
