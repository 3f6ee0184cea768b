#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dpass/expr.hpp"
#include "dpass/format.hpp"

namespace dpass {

/// A total order on jet coordinates compatible with differentiation.
///
/// Comparison runs through the weight blocks (each a weighted sum of the
/// multi-index, compared in turn), then total order, then a lexicographic or
/// reverse-lexicographic tie-break on the multi-index, then the unknown
/// priority. Every level is invariant under alpha -> alpha + e_k and total
/// order strictly increases, so u < D_k u and u < v implies D_k u < D_k v.
class Ranking {
 public:
  enum class TieBreak { Lex, RevLex };

  explicit Ranking(std::size_t dimension, std::vector<std::vector<unsigned>> weight_blocks = {},
                   TieBreak tie_break = TieBreak::Lex, std::vector<std::size_t> unknown_priority = {});

  /// Total degree, then lex with axis 1 most significant.
  static Ranking degree_lex(std::size_t dimension);
  /// Weight 1 on the given axes (one block), then degree, then tie_break.
  static Ranking elimination(std::size_t dimension, const std::vector<std::size_t>& axes,
                             TieBreak tie_break = TieBreak::RevLex);
  /// elim(x1), total degree, reverse lex.
  static Ranking default_for(std::size_t dimension);

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<std::vector<unsigned>>& weight_blocks() const noexcept { return blocks_; }
  TieBreak tie_break() const noexcept { return tie_break_; }

  std::strong_ordering compare(const JetVar& a, const JetVar& b) const;
  bool less(const JetVar& a, const JetVar& b) const { return compare(a, b) < 0; }

  /// Header clause, e.g. "elim(x1) degrevlex".
  std::string describe(const Naming& naming = {}) const;

  friend bool operator==(const Ranking&, const Ranking&) = default;

 private:
  std::size_t dimension_;
  std::vector<std::vector<unsigned>> blocks_;
  TieBreak tie_break_;
  std::vector<std::size_t> unknown_priority_;
};

using JetComparator = std::function<std::strong_ordering(const JetVar&, const JetVar&)>;

/// Stratum of an expression: its highest jet coordinate, or none for
/// expressions in the independent variables (and constants) only.
struct Stratum {
  std::optional<JetVar> top;
  bool x_only() const noexcept { return !top.has_value(); }
};

std::optional<JetVar> highest_jet(const Expr& e, const Ranking& ranking);
Stratum stratum_of_expr(const Expr& e, const Ranking& ranking);
/// X-only strata sit below every jet stratum.
std::strong_ordering compare_strata(const Stratum& a, const Stratum& b, const Ranking& ranking);

struct LeadingTerm {
  JetVar lead;
  Expr tail;
};

/// (u, g) when f == u + g canonically and every jet atom of g ranks below u.
std::optional<LeadingTerm> leading_term(const Expr& f, const Ranking& ranking);

struct RankingWitness {
  std::string axiom;
  JetVar first;
  JetVar second;
  std::size_t axis = 0;
};

struct RankingReport {
  bool pass = true;
  std::size_t checks = 0;
  std::optional<RankingWitness> witness;
};

/// Checks totality, antisymmetry, transitivity, translation invariance and
/// strict increase under every D_k. Exhaustive over jets of order <= max_order
/// for the given number of unknowns, plus random_samples random pairs of
/// higher order.
RankingReport validate_ranking(const JetComparator& compare, std::size_t dimension, std::size_t unknowns,
                               unsigned max_order, std::size_t random_samples = 0,
                               std::uint64_t seed = 1);
RankingReport validate_ranking(const Ranking& ranking, std::size_t unknowns, unsigned max_order,
                               std::size_t random_samples = 0, std::uint64_t seed = 1);

}  // namespace dpass
