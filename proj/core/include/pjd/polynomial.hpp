#pragma once

#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace pjd {

/// State space of a process. Interval and Simplex are the two spaces the
/// library models; Euclidean(n) is an auxiliary space of n unconstrained
/// variables used for joint polynomials (state plus jump-size variables) and
/// for full-coordinate input before reduction.
struct StateSpace {
  enum class Kind { Interval, Simplex, Euclidean };

  Kind kind = Kind::Interval;
  int d = 1;

  static StateSpace interval() { return {Kind::Interval, 1}; }
  static StateSpace simplex(int d);
  static StateSpace euclidean(int n);

  /// Number of polynomial variables. The simplex eliminates its last
  /// coordinate, x_d = 1 - sum_{i<d} x_i.
  int free_vars() const noexcept { return kind == Kind::Simplex ? d - 1 : d; }
  /// Number of ambient coordinates.
  int coords() const noexcept { return d; }

  bool is_interval() const noexcept { return kind == Kind::Interval; }
  bool is_simplex() const noexcept { return kind == Kind::Simplex; }

  std::string name() const;

  friend bool operator==(const StateSpace&, const StateSpace&) = default;
};

using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& k) noexcept;

/// Graded ordering: total degree first, then lexicographically descending,
/// so that (1,0) precedes (0,1). This is the basis order of every matrix
/// representation in the library.
struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const noexcept;
};

/// All multi-indices over `nvars` variables with |k| <= degree, graded order.
std::vector<MultiIndex> enumerate_indices(int nvars, int degree);

/// Monomial basis of Pol_N(E) over the free coordinates of `space`.
std::vector<MultiIndex> enumerate_basis(const StateSpace& space, int degree);

/// Sparse polynomial over the free coordinates of a state space. Exact zero
/// coefficients are never stored; the zero polynomial has an empty term map
/// and degree 0.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, double, GradedLexLess>;

  Polynomial() : Polynomial(StateSpace::interval()) {}
  explicit Polynomial(StateSpace space) : space_(space) {}

  static Polynomial constant(StateSpace space, double c);
  /// The free coordinate x_{var} (0-based) scaled by `coeff`.
  static Polynomial variable(StateSpace space, int var, double coeff = 1.0);
  static Polynomial monomial(StateSpace space, MultiIndex exponents, double coeff);
  /// Coordinate x_i (0-based) of the ambient space. On the simplex the last
  /// coordinate is 1 - sum of the free ones.
  static Polynomial coordinate(StateSpace space, int i);

  const StateSpace& space() const noexcept { return space_; }
  int nvars() const noexcept { return space_.free_vars(); }
  const TermMap& terms() const noexcept { return terms_; }

  bool is_zero() const noexcept { return terms_.empty(); }
  int degree() const noexcept;
  double coefficient(const MultiIndex& k) const;
  double max_abs_coefficient() const noexcept;

  /// Accumulates c * x^k.
  void add_term(const MultiIndex& k, double c);

  double eval(std::span<const double> x) const;
  double eval(std::initializer_list<double> x) const {
    return eval(std::span<const double>(x.begin(), x.size()));
  }
  /// Evaluates at an ambient point; on the simplex only the free
  /// coordinates are read.
  double eval_point(std::span<const double> point) const {
    return eval(point.first(static_cast<std::size_t>(nvars())));
  }

  Polynomial partial(int var) const;
  Polynomial pow(int n) const;
  /// Drops coefficients with magnitude <= rel_tol * max |coefficient|.
  Polynomial chopped(double rel_tol) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial operator-() const;

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  Polynomial operator+(double c) const;
  Polynomial operator-(double c) const { return *this + (-c); }

  /// Exact coefficient-wise equality within `tol` (absolute).
  bool approx_equal(const Polynomial& other, double tol) const;

  /// Human readable form, e.g. "0.5 - x" or "1 - 2*x1 + x1*x2".
  std::string to_string() const;

 private:
  void require_same_space(const Polynomial& other) const;

  StateSpace space_;
  TermMap terms_;
};

/// Expresses a polynomial in the ambient coordinates of `space` (given over
/// Euclidean(space.coords())) in the free coordinates. On the simplex x_d is
/// replaced by 1 - sum_{i<d} x_i; on the interval this is a relabeling.
Polynomial reduce_to_free(const StateSpace& space, const Polynomial& ambient);

/// Re-labels the variables of `p` into `target`, mapping variable i to
/// variable offset + i. `target` must have enough variables.
Polynomial embed(const Polynomial& p, const StateSpace& target, int offset = 0);

struct DivisionResult {
  Polynomial quotient;
  Polynomial remainder;
};

/// Multivariate division by a single polynomial in graded order.
DivisionResult divide(const Polynomial& num, const Polynomial& den);

/// Returns q with num = q * den up to a remainder whose largest coefficient
/// is at most tol * max|coeff(num)|. Throws Error(NotDivisible) otherwise.
Polynomial divide_exact(const Polynomial& num, const Polynomial& den, double tol = 1e-9);

}  // namespace pjd
