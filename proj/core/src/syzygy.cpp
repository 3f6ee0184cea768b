#include "dpass/syzygy.hpp"

#include <stdexcept>

#include "dpass/jet.hpp"

namespace dpass {

OperatorPoly OperatorPoly::monomial(const MultiIndex& alpha, const Rational& coef) {
  OperatorPoly p;
  Rational q = coef;
  q.canonicalize();
  if (sgn(q) != 0) p.terms_.emplace(alpha, q);
  return p;
}

OperatorPoly& OperatorPoly::operator+=(const OperatorPoly& other) {
  for (const auto& [alpha, c] : other.terms_) {
    Rational s = terms_[alpha] + c;
    if (sgn(s) == 0) {
      terms_.erase(alpha);
    } else {
      terms_[alpha] = s;
    }
  }
  return *this;
}

OperatorPoly OperatorPoly::operator-() const {
  OperatorPoly p = *this;
  for (auto& [alpha, c] : p.terms_) c = -c;
  return p;
}

OperatorPoly OperatorPoly::shifted(const MultiIndex& nu) const {
  OperatorPoly p;
  for (const auto& [alpha, c] : terms_) p.terms_.emplace(alpha + nu, c);
  return p;
}

SyzygyOp sigma(const std::vector<JetVar>& y, std::size_t i, std::size_t j) {
  if (i == j || i >= y.size() || j >= y.size()) throw std::invalid_argument("sigma: bad slot indices");
  if (y[i].unknown != y[j].unknown) throw std::invalid_argument("sigma: slots refer to different unknowns");
  SyzygyOp s(y.size());
  s[i] = OperatorPoly::monomial(diamond(y[i].order, y[j].order));
  s[j] = -OperatorPoly::monomial(diamond(y[j].order, y[i].order));
  return s;
}

JetCombination apply_syzygy(const SyzygyOp& s, const std::vector<JetVar>& y) {
  if (s.size() != y.size()) throw std::invalid_argument("apply_syzygy: arity mismatch");
  JetCombination out;
  for (std::size_t slot = 0; slot < s.size(); ++slot) {
    for (const auto& [alpha, c] : s[slot].terms()) {
      JetVar v{y[slot].unknown, y[slot].order + alpha};
      Rational sum = out[v] + c;
      if (sgn(sum) == 0) {
        out.erase(v);
      } else {
        out[v] = sum;
      }
    }
  }
  return out;
}

Expr apply_syzygy(const SyzygyOp& s, const std::vector<Expr>& fs) {
  if (s.size() != fs.size()) throw std::invalid_argument("apply_syzygy: arity mismatch");
  Expr out;
  for (std::size_t slot = 0; slot < s.size(); ++slot) {
    for (const auto& [alpha, c] : s[slot].terms()) out += Expr(c) * apply_power(fs[slot], alpha);
  }
  return out;
}

std::optional<MultiIndex> express_via_sigma(const SyzygyOp& s, const std::vector<JetVar>& y, std::size_t i,
                                            std::size_t j) {
  if (s.size() != y.size() || s[i].terms().size() != 1) return std::nullopt;
  for (std::size_t slot = 0; slot < s.size(); ++slot) {
    if (slot != i && slot != j && !s[slot].is_zero()) return std::nullopt;
  }
  const auto& [mu, coef] = *s[i].terms().begin();
  MultiIndex base = diamond(y[i].order, y[j].order);
  auto nu = divisibility(base, mu);
  if (!nu) return std::nullopt;
  SyzygyOp candidate = sigma(y, i, j);
  for (auto& p : candidate) p = p.shifted(*nu);
  for (auto& p : candidate) {
    OperatorPoly scaled;
    for (const auto& [alpha, c] : p.terms()) scaled += OperatorPoly::monomial(alpha, c * coef);
    p = scaled;
  }
  if (candidate != s) return std::nullopt;
  return nu;
}

Expr tau(const Equation& f1, const Equation& f2) {
  if (f1.lead.unknown != f2.lead.unknown) throw std::invalid_argument("tau: leading terms on different unknowns");
  const MultiIndex& alpha = f1.lead.order;
  const MultiIndex& beta = f2.lead.order;
  return apply_power(f1.expr(), diamond(alpha, beta)) - apply_power(f2.expr(), diamond(beta, alpha));
}

Expr tau(const Expr& f1, const Expr& f2, const Ranking& ranking) {
  auto l1 = leading_term(f1, ranking);
  auto l2 = leading_term(f2, ranking);
  if (!l1 || !l2) throw std::invalid_argument("tau: argument is not orderly solvable");
  return tau(Equation{"", l1->lead, l1->tail}, Equation{"", l2->lead, l2->tail});
}

std::vector<std::pair<std::size_t, std::size_t>> critical_pairs(const DiffSystem& system) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < system.size(); ++i) {
    for (std::size_t j = i + 1; j < system.size(); ++j) {
      if (system[i].lead.unknown == system[j].lead.unknown) out.emplace_back(i, j);
    }
  }
  return out;
}

}  // namespace dpass
