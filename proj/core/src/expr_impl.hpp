#pragma once

// Internal representation of canonical expressions. Not installed.

#include <optional>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "dpass/expr.hpp"

namespace dpass::detail {

/// Argument of the exponential factor of a monomial, stored as a rational
/// linear combination of basis expressions (sorted ascending). exp(0) is the
/// empty combination.
struct ExpArg {
  std::vector<std::pair<Expr, Rational>> parts;

  bool empty() const noexcept { return parts.empty(); }
  Expr to_expr() const;
  friend bool operator==(const ExpArg&, const ExpArg&) = default;
};

/// Laurent monomial times an optional exponential.
// Most monomials have a handful of factors; keep them inline.
using Powers = boost::container::small_vector<std::pair<Atom, int>, 4>;

struct Monomial {
  Powers powers;  // sorted by atom, nonzero exponents
  ExpArg exp;

  bool is_one() const noexcept { return powers.empty() && exp.empty(); }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

struct Term {
  Monomial mono;
  Rational coef;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Sorted by descending monomial order, all coefficients nonzero.
using Poly = std::vector<Term>;

struct Factor {
  Poly poly;
  int multiplicity = 1;
  friend bool operator==(const Factor&, const Factor&) = default;
};

struct Node {
  Poly num;
  std::vector<Factor> den;  // sorted by poly order, normalized, multi-term
};

// Orders ------------------------------------------------------------------

int compare_exp(const ExpArg& a, const ExpArg& b);
/// A total order compatible with multiplication (a group order on the
/// monomial group), used both for sorting and as the division order.
int compare_mono(const Monomial& a, const Monomial& b);
int compare_poly(const Poly& a, const Poly& b);
int compare_node(const Node& a, const Node& b);

// Monomial arithmetic -----------------------------------------------------

ExpArg add_exp(const ExpArg& a, const ExpArg& b, int sign = 1);
Monomial mul_mono(const Monomial& a, const Monomial& b);
Monomial div_mono(const Monomial& a, const Monomial& b);
Monomial inverse_mono(const Monomial& a);

// Polynomial arithmetic ---------------------------------------------------

Poly poly_constant(const Rational& c);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_neg(Poly a);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(Poly a, const Rational& c, const Monomial& m);
Poly poly_pow(const Poly& a, unsigned k);
/// Exact quotient a / b if b divides a, nullopt otherwise.
std::optional<Poly> poly_divide(const Poly& a, const Poly& b);

struct Normalized {
  Rational coef;
  Monomial unit;
  Poly poly;  // a == coef * unit * poly
};
/// Strips the monomial content and rational content of a nonzero poly, making
/// the leading coefficient a positive primitive integer.
Normalized normalize(const Poly& a);

// Node construction -------------------------------------------------------

std::shared_ptr<const Node> make_node(Poly num, std::vector<Factor> den);
Expr from_poly(Poly p);
Expr reciprocal_of_factor(const Poly& normalized_factor, int multiplicity);
/// num / den where den is an arbitrary nonzero poly; candidate factors are
/// tried by trial division so shared denominators are recognized.
Expr quotient(Poly num, const Poly& den, const std::vector<Factor>& candidates);

/// Sum over a single common denominator, cancelled once.
Expr sum(const std::vector<Expr>& terms);
Poly expand_factors(const std::vector<Factor>& factors);

}  // namespace dpass::detail
