#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dpass/expr.hpp"
#include "dpass/parse.hpp"
#include "dpass/ranking.hpp"
#include "dpass/reduce.hpp"
#include "dpass/zero_test.hpp"

namespace dpass::testing {

// Equations of the worked examples, in the default file syntax (axis 1 = t).
inline const char* const kF = "u[1,1] - sinh(u)";
inline const char* const kH1 = "u[0,3] - 1/2*u[0,1]^3";
inline const char* const kF1 = "u[0,2] - 1/2*u[0,1]^2*tanh(u)";
inline const char* const kF2 = "u[1,0] - 2*cosh(u)/u[0,1]";
inline const char* const kH2 = "u[0,5] - 5/2*u[0,1]^2*u[0,3] - 5/2*u[0,1]*u[0,2]^2 + 3/8*u[0,1]^5";
inline const char* const kF3 =
    "u[0,4] - u[0,1]*u[0,3]*tanh(u) + 1/2*u[0,2]^2*tanh(u) - 3/2*u[0,1]^2*u[0,2] + 3/8*u[0,1]^4*tanh(u)";
inline const char* const kF4 = "u[1,0] + 4*(u[0,1]^3 - 2*u[0,3])*cosh(u)/(8*u[0,1]*u[0,3] - 4*u[0,2]^2 - 3*u[0,1]^4)";
inline const char* const kF5 = "u[0,3] + u[0,1]*u[0,2] - u[0,1]^3 + r*exp(3*u) + s*exp(-u)";
inline const char* const kF6 = "u[1,0] + (u[0,2] - u[0,1]^2)*exp(-u)";
inline const char* const kF7 = "u[1,1] + r*exp(2*u) + s*exp(-2*u)";

inline ParseContext context_rs() {
  ParseContext ctx;
  ctx.constants = {"r", "s"};
  return ctx;
}

inline Expr P(const std::string& text) { return parse(text, context_rs()); }

inline DiffSystem system_of(const std::vector<std::pair<std::string, std::string>>& eqs) {
  std::vector<std::pair<std::string, Expr>> exprs;
  for (const auto& [name, text] : eqs) exprs.emplace_back(name, P(text));
  return DiffSystem::from_expressions(exprs, Ranking::default_for(2), 1);
}

inline bool same(const Expr& a, const Expr& b) { return is_zero(a - b); }

/// Seeded generator of random expressions in two independent variables and
/// one unknown. Denominators are drawn from factors without zeros on the
/// zero-test box.
class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed, unsigned max_order = 2) : rng_(seed), max_order_(max_order) {}

  std::mt19937_64& rng() { return rng_; }

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  MultiIndex index(unsigned max_order) {
    unsigned total = static_cast<unsigned>(uniform(0, static_cast<int>(max_order)));
    unsigned a = static_cast<unsigned>(uniform(0, static_cast<int>(total)));
    return MultiIndex{a, total - a};
  }

  JetVar jet() { return JetVar{0, index(max_order_)}; }

  Rational coefficient() {
    int n = 0;
    while (n == 0) n = uniform(-4, 4);
    return Rational(n, uniform(1, 3));
  }

  Expr factor() {
    switch (uniform(0, 5)) {
      case 0:
        return Expr::independent(static_cast<std::size_t>(uniform(0, 1)));
      case 1:
        return exp(Expr(Rational(uniform(-2, 2))) * Expr::jet(0, MultiIndex{0, 0}));
      default:
        return Expr::jet(jet());
    }
  }

  Expr monomial() {
    Expr m = coefficient();
    int k = uniform(0, 3);
    for (int i = 0; i < k; ++i) m *= factor();
    return m;
  }

  Expr polynomial(int max_terms = 3) {
    Expr p;
    int k = uniform(1, max_terms);
    for (int i = 0; i < k; ++i) p += monomial();
    return p;
  }

  Expr denominator() {
    static const char* const kSafe[] = {"1 + u^2", "u[0,1]", "cosh(u)", "2 + x1", "u[0,1] + u[1,0]", "exp(u) + 1"};
    return P(kSafe[uniform(0, 5)]);
  }

  /// Polynomial, or with probability about 1/3 a quotient by a safe factor.
  Expr expr() {
    Expr p = polynomial();
    if (uniform(0, 2) == 0) p /= denominator();
    return p;
  }

 private:
  std::mt19937_64 rng_;
  unsigned max_order_;
};

}  // namespace dpass::testing
