#include "dpass/reduce.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "dpass/format.hpp"
#include "dpass/jet.hpp"
#include "reduce_impl.hpp"

namespace dpass {

// DiffSystem --------------------------------------------------------------

DiffSystem::DiffSystem(std::vector<Equation> equations, Ranking ranking, std::size_t unknowns)
    : equations_(std::move(equations)), ranking_(std::move(ranking)), unknowns_(unknowns) {
  std::set<std::string> names;
  std::set<JetVar> leads;
  for (const auto& eq : equations_) {
    if (!names.insert(eq.name).second) throw InvalidSystemError("duplicate equation name '" + eq.name + "'");
    if (eq.lead.order.dimension() != ranking_.dimension()) {
      throw InvalidSystemError("equation '" + eq.name + "' has a jet coordinate of the wrong dimension");
    }
    if (eq.lead.unknown >= unknowns_) throw InvalidSystemError("equation '" + eq.name + "' uses an undeclared unknown");
    if (!leads.insert(eq.lead).second) {
      throw InvalidSystemError("equation '" + eq.name + "' repeats the leading coordinate " + format(eq.lead));
    }
    for (const auto& v : jet_atoms(eq.tail)) {
      if (!ranking_.less(v, eq.lead)) {
        throw InvalidSystemError("tail of '" + eq.name + "' depends on " + format(v) +
                                 " which does not rank below " + format(eq.lead));
      }
    }
  }
}

DiffSystem DiffSystem::from_expressions(const std::vector<std::pair<std::string, Expr>>& exprs,
                                        const Ranking& ranking, std::size_t unknowns) {
  std::vector<Equation> eqs;
  for (const auto& [name, e] : exprs) {
    auto lt = leading_term(e, ranking);
    if (!lt) throw InvalidSystemError("equation '" + name + "' is not orderly solvable");
    eqs.push_back(Equation{name, lt->lead, lt->tail});
  }
  return DiffSystem(std::move(eqs), ranking, unknowns);
}

const Equation* DiffSystem::find(const std::string& name) const {
  for (const auto& eq : equations_) {
    if (eq.name == name) return &eq;
  }
  return nullptr;
}

DiffSystem DiffSystem::with(Equation extra) const {
  auto eqs = equations_;
  eqs.push_back(std::move(extra));
  return DiffSystem(std::move(eqs), ranking_, unknowns_);
}

DiffSystem DiffSystem::subset(const std::vector<std::string>& names) const {
  std::vector<Equation> eqs;
  for (const auto& n : names) {
    const Equation* eq = find(n);
    if (!eq) throw InvalidSystemError("no equation named '" + n + "'");
    eqs.push_back(*eq);
  }
  return DiffSystem(std::move(eqs), ranking_, unknowns_);
}

// Reduction ---------------------------------------------------------------

const Expr& Prolongations::tail(const MultiIndex& delta) {
  if (delta.is_zero()) return tail_;
  if (auto it = memo_.find(delta); it != memo_.end()) return it->second;
  std::size_t axis = delta.dimension();
  while (delta[--axis] == 0) {
  }
  MultiIndex parent = delta;
  parent[axis] -= 1;
  Expr d = total_derivative(tail(parent), axis);
  return memo_.emplace(delta, std::move(d)).first->second;
}

std::optional<std::pair<Expr, ReductionStep>> reduce_once(const Expr& f, const Equation& eq,
                                                          const Ranking& ranking) {
  std::optional<JetVar> target;
  for (const auto& v : jet_atoms(f)) {
    if (v.unknown != eq.lead.unknown || !eq.lead.order.divides(v.order)) continue;
    if (!target || ranking.less(*target, v)) target = v;
  }
  if (!target) return std::nullopt;
  MultiIndex delta = *divisibility(eq.lead.order, target->order);
  Expr r = substitute(f, Atom::jet(*target), -apply_power(eq.tail, delta));
  return std::pair{r, ReductionStep{*target, eq.name, delta, r}};
}

namespace detail {

std::optional<std::size_t> generating_equation(const JetVar& v, const std::vector<Equation>& eqs) {
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    if (eqs[i].lead.unknown == v.unknown && eqs[i].lead.order.divides(v.order)) return i;
  }
  return std::nullopt;
}

std::vector<JetVar> principal_atoms(const Expr& e, const std::vector<Equation>& eqs, const Ranking& ranking) {
  std::vector<JetVar> out;
  for (const auto& v : jet_atoms(e)) {
    if (generating_equation(v, eqs)) out.push_back(v);
  }
  std::sort(out.begin(), out.end(), [&](const JetVar& a, const JetVar& b) { return ranking.less(a, b); });
  return out;
}

NormalForm normal_form(const Expr& f, const std::vector<Equation>& eqs, const Ranking& ranking,
                       const ReduceOptions& options, std::vector<Prolongations>* cache) {
  std::vector<Prolongations> local;
  if (!cache) {
    for (const auto& eq : eqs) local.emplace_back(eq);
    cache = &local;
  }
  std::optional<std::mt19937_64> rng;
  if (options.random_choice_seed) rng.emplace(*options.random_choice_seed);

  NormalForm result{f, {}};
  while (true) {
    auto principal = principal_atoms(result.remainder, eqs, ranking);
    if (principal.empty()) return result;
    if (result.trace.size() >= options.max_steps) throw StepBudgetExceeded(options.max_steps, result.trace);
    JetVar target = principal.back();
    if (rng) {
      std::uniform_int_distribution<std::size_t> pick(0, principal.size() - 1);
      target = principal[pick(*rng)];
    }
    std::size_t index = *generating_equation(target, eqs);
    const Equation& eq = eqs[index];
    MultiIndex delta = *divisibility(eq.lead.order, target.order);
    Expr replacement = -(*cache)[index].tail(delta);
    result.remainder = substitute(result.remainder, Atom::jet(target), replacement);
    result.trace.push_back(ReductionStep{target, eq.name, delta, result.remainder});
  }
}

}  // namespace detail

NormalForm normal_form(const Expr& f, const DiffSystem& system, const ReduceOptions& options) {
  return detail::normal_form(f, system.equations(), system.ranking(), options, nullptr);
}

std::vector<JetVar> principal_atoms(const Expr& e, const DiffSystem& system) {
  return detail::principal_atoms(e, system.equations(), system.ranking());
}

std::optional<std::size_t> generating_equation(const JetVar& v, const DiffSystem& system) {
  return detail::generating_equation(v, system.equations());
}

// Monic equations ---------------------------------------------------------

std::optional<Monic> monicize(const Expr& r, const Ranking& ranking, const ZeroTestOptions& zero) {
  auto top = highest_jet(r, ranking);
  if (!top) return std::nullopt;
  Atom u = Atom::jet(*top);
  Expr c = partial(r, u);
  if (depends_on(c, u)) return std::nullopt;
  if (zero_test(c, zero).zero) return std::nullopt;
  Expr d = substitute(r, u, Expr());
  return Monic{*top, d / c};
}

// Normalized sets ---------------------------------------------------------

NormalizationReport is_normalized(const DiffSystem& system, const Naming& naming) {
  const auto& eqs = system.equations();
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    for (std::size_t j = 0; j < eqs.size(); ++j) {
      if (i == j || eqs[i].lead.unknown != eqs[j].lead.unknown) continue;
      if (auto delta = divisibility(eqs[j].lead.order, eqs[i].lead.order)) {
        return {false, "lead " + format(eqs[i].lead, naming) + " of '" + eqs[i].name + "' is D^" +
                           delta->to_string() + " of lead " + format(eqs[j].lead, naming) + " of '" +
                           eqs[j].name + "'"};
      }
    }
  }
  for (const auto& eq : eqs) {
    auto principal = principal_atoms(eq.tail, system);
    if (!principal.empty()) {
      return {false, "tail of '" + eq.name + "' depends on principal coordinate " +
                         format(principal.back(), naming)};
    }
  }
  return {true, {}};
}

DiffSystem autoreduce(const DiffSystem& system, const AutoreduceOptions& options) {
  std::vector<Equation> eqs = system.equations();
  const Ranking& ranking = system.ranking();
  auto without = [&](std::size_t i) {
    std::vector<Equation> others = eqs;
    others.erase(others.begin() + static_cast<std::ptrdiff_t>(i));
    return others;
  };
  constexpr int kMaxPasses = 1000;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i < eqs.size() && !changed; ++i) {
      for (std::size_t j = 0; j < eqs.size(); ++j) {
        if (i == j || eqs[i].lead.unknown != eqs[j].lead.unknown) continue;
        if (!eqs[j].lead.order.divides(eqs[i].lead.order)) continue;
        if (eqs[i].lead == eqs[j].lead && j > i) continue;
        auto others = without(i);
        Expr r = detail::normal_form(eqs[i].expr(), others, ranking, options.reduce, nullptr).remainder;
        if (zero_test(r, options.zero).zero) {
          eqs.erase(eqs.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
          auto m = monicize(r, ranking, options.zero);
          if (!m) {
            throw AutoreduceError("equation '" + eqs[i].name + "' reduces modulo '" + eqs[j].name +
                                  "' to a remainder that is not orderly solvable: " + format(r));
          }
          eqs[i] = Equation{eqs[i].name, m->lead, m->tail};
        }
        changed = true;
        break;
      }
    }
    if (changed) continue;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      auto others = without(i);
      Expr t = detail::normal_form(eqs[i].tail, others, ranking, options.reduce, nullptr).remainder;
      if (t != eqs[i].tail) {
        eqs[i].tail = t;
        changed = true;
      }
    }
    if (!changed) return DiffSystem(std::move(eqs), ranking, system.unknowns());
  }
  throw AutoreduceError("autoreduction did not stabilize");
}

}  // namespace dpass
