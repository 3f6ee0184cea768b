#pragma once

// Symbolic expressions over independent variables, jet coordinates, symbolic
// constants and the kernels exp/log (sinh, cosh and tanh are rewritten into
// exponentials on construction).
//
// An Expr is always held in canonical form: a quotient N / (F_1^e_1 ... F_k^e_k)
// where N is a Laurent polynomial whose "monomials" may carry one exponential
// factor exp(E), and the F_i are normalized multi-term polynomials that do not
// divide N. Identities such as cosh^2 - sinh^2 = 1, exp(a)exp(b) = exp(a+b) and
// sinh(2u) = 2 sinh(u) cosh(u) hold structurally.

#include <compare>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include <gmpxx.h>

#include "dpass/multi_index.hpp"

namespace dpass {

using Rational = mpq_class;

namespace detail {
struct Node;
}

class Atom;

class Expr {
 public:
  /// The zero expression.
  Expr();
  Expr(long value);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)

  static Expr atom(const Atom& a);
  static Expr independent(std::size_t axis);
  static Expr jet(const JetVar& v);
  static Expr jet(std::size_t unknown, MultiIndex order);
  static Expr constant(const std::string& name);

  bool is_zero_literal() const noexcept;
  /// The value if the expression is a rational number.
  std::optional<Rational> as_rational() const;
  /// True if the canonical form has a non-trivial denominator.
  bool has_denominator() const noexcept;
  std::size_t term_count() const noexcept;

  Expr operator-() const;
  Expr& operator+=(const Expr& other);
  Expr& operator-=(const Expr& other);
  Expr& operator*=(const Expr& other);
  Expr& operator/=(const Expr& other);

  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
  friend Expr operator*(Expr a, const Expr& b) { return a *= b; }
  friend Expr operator/(Expr a, const Expr& b) { return a /= b; }

  friend bool operator==(const Expr& a, const Expr& b);
  friend std::strong_ordering operator<=>(const Expr& a, const Expr& b);

  const detail::Node& node() const noexcept { return *node_; }
  explicit Expr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<const detail::Node> node_;
};

/// Base atoms are independent variables x_k, jet coordinates u^i_alpha and
/// named constants. Log atoms are opaque kernel symbols log(A).
///
/// Atoms are interned: equal atoms share one immutable payload, so copies are
/// a pointer copy and equality is pointer identity.
class Atom {
 public:
  enum class Kind : unsigned char { Independent, Jet, Constant, Log };

  Atom();
  static Atom independent(std::size_t axis);
  static Atom jet(JetVar v);
  static Atom constant(std::string name);
  static Atom log(Expr argument);

  Kind kind() const noexcept { return p_->kind; }
  bool is_base() const noexcept { return p_->kind != Kind::Log; }
  std::size_t axis() const noexcept { return p_->axis; }
  const JetVar& jet_var() const noexcept { return p_->jet; }
  const std::string& name() const noexcept { return p_->name; }
  const Expr& log_argument() const noexcept { return p_->argument; }

  friend bool operator==(const Atom& a, const Atom& b) noexcept { return a.p_ == b.p_; }
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    if (a.p_ == b.p_) return std::strong_ordering::equal;
    if (a.p_->keyed && b.p_->keyed && a.p_->key != b.p_->key) return a.p_->key <=> b.p_->key;
    return compare(*a.p_, *b.p_);
  }

  struct Payload {
    Kind kind = Kind::Independent;
    std::size_t axis = 0;
    JetVar jet;
    std::string name;
    Expr argument;
    // Order-preserving packed key for small independent and jet atoms.
    std::uint64_t key = 0;
    bool keyed = false;
  };
  /// Field-by-field order; the packed key agrees with it wherever both exist.
  static std::strong_ordering compare(const Payload& a, const Payload& b);

 private:
  explicit Atom(const Payload* p) : p_(p) {}
  static Atom intern(Payload p);

  const Payload* p_;
};

using AtomSet = std::set<Atom>;
using Assignment = std::map<Atom, double>;

Expr pow(const Expr& base, int exponent);
Expr exp(const Expr& argument);
Expr log(const Expr& argument);
Expr sinh(const Expr& argument);
Expr cosh(const Expr& argument);
Expr tanh(const Expr& argument);

/// Canonical form. Expressions are canonicalized on construction, so this is
/// the identity; it exists so callers can state intent.
Expr simplify(const Expr& e);

/// Base atoms the canonical form depends on, looking through kernels.
AtomSet depends_on(const Expr& e);
bool depends_on(const Expr& e, const Atom& a);

/// Jet coordinates among depends_on(e).
std::set<JetVar> jet_atoms(const Expr& e);

/// Replaces base atoms; atoms mapped to nullopt are kept.
using AtomMap = std::function<std::optional<Expr>(const Atom&)>;
Expr substitute(const Expr& e, const AtomMap& replacement);
Expr substitute(const Expr& e, const Atom& target, const Expr& replacement);
Expr substitute(const Expr& e, const std::map<Atom, Expr>& replacements);

/// Applies the derivation determined by its values on base atoms; the chain
/// rule through exp and log is handled here.
using AtomDerivative = std::function<Expr(const Atom&)>;
Expr derive(const Expr& e, const AtomDerivative& derivative);

/// Partial derivative with respect to a base atom.
Expr partial(const Expr& e, const Atom& v);

struct EvalOptions {
  double pole_epsilon = 1e-12;
};

double eval(const Expr& e, const Assignment& values, const EvalOptions& options = {});

}  // namespace dpass
