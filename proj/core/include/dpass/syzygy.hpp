#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dpass/expr.hpp"
#include "dpass/reduce.hpp"

namespace dpass {

/// Finite sum of a_alpha D^alpha with rational coefficients.
class OperatorPoly {
 public:
  OperatorPoly() = default;
  static OperatorPoly monomial(const MultiIndex& alpha, const Rational& coef = 1);

  const std::map<MultiIndex, Rational>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  OperatorPoly& operator+=(const OperatorPoly& other);
  OperatorPoly operator-() const;
  /// Composition D^nu * P.
  OperatorPoly shifted(const MultiIndex& nu) const;

  friend bool operator==(const OperatorPoly&, const OperatorPoly&) = default;

 private:
  std::map<MultiIndex, Rational> terms_;
};

/// Element of D^k; a syzygy of a tuple y when sum_s P_s y_s = 0.
using SyzygyOp = std::vector<OperatorPoly>;

/// Linear combination of jet coordinates (the space RU).
using JetCombination = std::map<JetVar, Rational>;

/// sigma_ij = D^{alpha<>beta} e_i - D^{beta<>alpha} e_j for y_i = u^l_alpha,
/// y_j = u^l_beta. Throws std::invalid_argument on an unknown-index mismatch
/// or i == j.
SyzygyOp sigma(const std::vector<JetVar>& y, std::size_t i, std::size_t j);

/// sum_s P_s y_s in RU, zero entries dropped.
JetCombination apply_syzygy(const SyzygyOp& s, const std::vector<JetVar>& y);

/// sum_s P_s f_s as an expression.
Expr apply_syzygy(const SyzygyOp& s, const std::vector<Expr>& fs);

/// If s is a two-term syzygy D^mu e_i - D^eta e_j of y, the nu with
/// s == D^nu sigma_ij.
std::optional<MultiIndex> express_via_sigma(const SyzygyOp& s, const std::vector<JetVar>& y, std::size_t i,
                                            std::size_t j);

/// D^{alpha<>beta} f1 - D^{beta<>alpha} f2 for leads u^i_alpha, u^i_beta.
Expr tau(const Equation& f1, const Equation& f2);
/// Same, computing leading terms under the ranking; throws
/// std::invalid_argument if either is not orderly solvable or the unknowns
/// differ.
Expr tau(const Expr& f1, const Expr& f2, const Ranking& ranking);

/// Unordered pairs (i < j) of equations whose leads share an unknown.
std::vector<std::pair<std::size_t, std::size_t>> critical_pairs(const DiffSystem& system);

}  // namespace dpass
