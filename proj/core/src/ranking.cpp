#include "dpass/ranking.hpp"

#include <random>
#include <stdexcept>

namespace dpass {

Ranking::Ranking(std::size_t dimension, std::vector<std::vector<unsigned>> weight_blocks, TieBreak tie_break,
                 std::vector<std::size_t> unknown_priority)
    : dimension_(dimension),
      blocks_(std::move(weight_blocks)),
      tie_break_(tie_break),
      unknown_priority_(std::move(unknown_priority)) {
  for (const auto& b : blocks_) {
    if (b.size() != dimension_) throw std::invalid_argument("ranking weight block has wrong dimension");
  }
}

Ranking Ranking::degree_lex(std::size_t dimension) { return Ranking(dimension, {}, TieBreak::Lex); }

Ranking Ranking::elimination(std::size_t dimension, const std::vector<std::size_t>& axes, TieBreak tie_break) {
  std::vector<unsigned> w(dimension, 0);
  for (std::size_t a : axes) w.at(a) = 1;
  return Ranking(dimension, {w}, tie_break);
}

Ranking Ranking::default_for(std::size_t dimension) {
  if (dimension == 0) return Ranking(0);
  return elimination(dimension, {0}, TieBreak::RevLex);
}

std::strong_ordering Ranking::compare(const JetVar& a, const JetVar& b) const {
  const MultiIndex& x = a.order;
  const MultiIndex& y = b.order;
  for (const auto& w : blocks_) {
    unsigned sx = 0;
    unsigned sy = 0;
    for (std::size_t k = 0; k < dimension_; ++k) {
      sx += w[k] * x[k];
      sy += w[k] * y[k];
    }
    if (auto c = sx <=> sy; c != 0) return c;
  }
  if (auto c = x.order() <=> y.order(); c != 0) return c;
  if (tie_break_ == TieBreak::Lex) {
    for (std::size_t k = 0; k < dimension_; ++k) {
      if (auto c = x[k] <=> y[k]; c != 0) return c;
    }
  } else {
    for (std::size_t k = dimension_; k-- > 0;) {
      if (auto c = y[k] <=> x[k]; c != 0) return c;
    }
  }
  auto priority = [&](std::size_t u) {
    for (std::size_t i = 0; i < unknown_priority_.size(); ++i) {
      if (unknown_priority_[i] == u) return i;
    }
    return unknown_priority_.size() + u;
  };
  return priority(a.unknown) <=> priority(b.unknown);
}

std::string Ranking::describe(const Naming& naming) const {
  std::string s;
  for (const auto& w : blocks_) {
    std::string names;
    for (std::size_t k = 0; k < dimension_; ++k) {
      if (w[k] == 0) continue;
      if (!names.empty()) names += ",";
      names += naming.independent(k);
      if (w[k] > 1) names += ":" + std::to_string(w[k]);
    }
    s += "elim(" + names + ") ";
  }
  s += tie_break_ == TieBreak::Lex ? "deglex" : "degrevlex";
  return s;
}

std::optional<JetVar> highest_jet(const Expr& e, const Ranking& ranking) {
  std::optional<JetVar> top;
  for (const auto& v : jet_atoms(e)) {
    if (!top || ranking.less(*top, v)) top = v;
  }
  return top;
}

Stratum stratum_of_expr(const Expr& e, const Ranking& ranking) { return Stratum{highest_jet(e, ranking)}; }

std::strong_ordering compare_strata(const Stratum& a, const Stratum& b, const Ranking& ranking) {
  if (a.x_only() || b.x_only()) return !a.x_only() <=> !b.x_only();
  return ranking.compare(*a.top, *b.top);
}

std::optional<LeadingTerm> leading_term(const Expr& f, const Ranking& ranking) {
  auto top = highest_jet(f, ranking);
  if (!top) return std::nullopt;
  Expr lead = Expr::jet(*top);
  Expr tail = f - lead;
  if (depends_on(tail, Atom::jet(*top))) return std::nullopt;
  return LeadingTerm{*top, tail};
}

namespace {

JetVar shifted(const JetVar& v, std::size_t axis) {
  return JetVar{v.unknown, v.order + MultiIndex::unit(v.order.dimension(), axis)};
}

bool check_pair(const JetComparator& cmp, const JetVar& a, const JetVar& b, std::size_t dimension,
                RankingReport& report) {
  auto ab = cmp(a, b);
  auto ba = cmp(b, a);
  report.checks += 1;
  if ((ab == 0) != (a == b)) {
    report.pass = false;
    report.witness = RankingWitness{"totality: equal only for identical coordinates", a, b, 0};
    return false;
  }
  if ((ab < 0) != (ba > 0)) {
    report.pass = false;
    report.witness = RankingWitness{"antisymmetry", a, b, 0};
    return false;
  }
  for (std::size_t k = 0; k < dimension; ++k) {
    report.checks += 1;
    if (cmp(shifted(a, k), shifted(b, k)) != ab) {
      report.pass = false;
      report.witness = RankingWitness{"translation invariance: u < v implies D_k u < D_k v", a, b, k};
      return false;
    }
  }
  return true;
}

bool check_single(const JetComparator& cmp, const JetVar& a, std::size_t dimension, RankingReport& report) {
  for (std::size_t k = 0; k < dimension; ++k) {
    report.checks += 1;
    if (!(cmp(a, shifted(a, k)) < 0)) {
      report.pass = false;
      report.witness = RankingWitness{"strict increase: u < D_k u", a, shifted(a, k), k};
      return false;
    }
  }
  return true;
}

}  // namespace

RankingReport validate_ranking(const JetComparator& cmp, std::size_t dimension, std::size_t unknowns,
                               unsigned max_order, std::size_t random_samples, std::uint64_t seed) {
  RankingReport report;
  std::vector<JetVar> jets;
  for (std::size_t u = 0; u < unknowns; ++u) {
    for (auto& alpha : multi_indices_up_to(dimension, max_order)) jets.push_back(JetVar{u, alpha});
  }
  for (const auto& a : jets) {
    if (!check_single(cmp, a, dimension, report)) return report;
    for (const auto& b : jets) {
      if (!check_pair(cmp, a, b, dimension, report)) return report;
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> order(0, max_order + 4);
  std::uniform_int_distribution<std::size_t> unknown(0, unknowns == 0 ? 0 : unknowns - 1);
  auto random_jet = [&] {
    MultiIndex alpha(dimension);
    for (std::size_t k = 0; k < dimension; ++k) alpha[k] = order(rng);
    return JetVar{unknown(rng), alpha};
  };
  for (std::size_t s = 0; s < random_samples; ++s) {
    JetVar a = random_jet();
    JetVar b = random_jet();
    JetVar c = random_jet();
    if (!check_single(cmp, a, dimension, report)) return report;
    if (!check_pair(cmp, a, b, dimension, report)) return report;
    report.checks += 1;
    if (cmp(a, b) < 0 && cmp(b, c) < 0 && !(cmp(a, c) < 0)) {
      report.pass = false;
      report.witness = RankingWitness{"transitivity", a, c, 0};
      return report;
    }
  }
  return report;
}

RankingReport validate_ranking(const Ranking& ranking, std::size_t unknowns, unsigned max_order,
                               std::size_t random_samples, std::uint64_t seed) {
  return validate_ranking([&](const JetVar& a, const JetVar& b) { return ranking.compare(a, b); },
                          ranking.dimension(), unknowns, max_order, random_samples, seed);
}

}  // namespace dpass
