#include "dpass/jet.hpp"

#include <algorithm>
#include <stdexcept>

#include "dpass/zero_test.hpp"

namespace dpass {

MultiIndex diamond(const MultiIndex& alpha, const MultiIndex& beta) {
  if (alpha.dimension() != beta.dimension()) throw std::invalid_argument("multi-index dimension mismatch");
  MultiIndex mu(alpha.dimension());
  for (std::size_t k = 0; k < alpha.dimension(); ++k) mu[k] = std::max(alpha[k], beta[k]) - alpha[k];
  return mu;
}

std::optional<MultiIndex> divisibility(const MultiIndex& alpha, const MultiIndex& beta) {
  if (!alpha.divides(beta)) return std::nullopt;
  MultiIndex delta(alpha.dimension());
  for (std::size_t k = 0; k < alpha.dimension(); ++k) delta[k] = beta[k] - alpha[k];
  return delta;
}

MultiIndex lcm(const MultiIndex& alpha, const MultiIndex& beta) {
  if (alpha.dimension() != beta.dimension()) throw std::invalid_argument("multi-index dimension mismatch");
  MultiIndex m(alpha.dimension());
  for (std::size_t k = 0; k < alpha.dimension(); ++k) m[k] = std::max(alpha[k], beta[k]);
  return m;
}

Expr total_derivative(const Expr& e, std::size_t axis) {
  return derive(e, [axis](const Atom& a) -> Expr {
    switch (a.kind()) {
      case Atom::Kind::Independent:
        return a.axis() == axis ? Expr(1) : Expr();
      case Atom::Kind::Jet: {
        const JetVar& v = a.jet_var();
        if (axis >= v.order.dimension()) throw std::out_of_range("total derivative axis out of range");
        return Expr::jet(v.unknown, v.order + MultiIndex::unit(v.order.dimension(), axis));
      }
      default:
        return Expr();
    }
  });
}

Expr apply_power(const Expr& e, const MultiIndex& alpha) {
  Expr r = e;
  for (std::size_t axis = 0; axis < alpha.dimension(); ++axis) {
    for (unsigned i = 0; i < alpha[axis]; ++i) r = total_derivative(r, axis);
  }
  return r;
}

bool commutativity_check(const Expr& e, std::size_t i, std::size_t j) {
  Expr d = total_derivative(total_derivative(e, j), i) - total_derivative(total_derivative(e, i), j);
  return is_zero(d);
}

}  // namespace dpass
