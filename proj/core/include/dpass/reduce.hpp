#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dpass/error.hpp"
#include "dpass/expr.hpp"
#include "dpass/ranking.hpp"
#include "dpass/zero_test.hpp"

namespace dpass {

/// lead + tail = 0, solved for its leading coordinate.
struct Equation {
  std::string name;
  JetVar lead;
  Expr tail;

  Expr expr() const { return Expr::jet(lead) + tail; }
  friend bool operator==(const Equation&, const Equation&) = default;
};

class InvalidSystemError : public Error {
 public:
  using Error::Error;
};

/// Immutable set of orderly solvable equations with pairwise distinct
/// leading coordinates, together with the ranking that defines them.
class DiffSystem {
 public:
  /// Throws InvalidSystemError when a tail is not below its lead, leads
  /// repeat, names repeat, or dimensions disagree.
  DiffSystem(std::vector<Equation> equations, Ranking ranking, std::size_t unknowns);

  /// Builds equations through leading_term; throws InvalidSystemError naming
  /// the first expression that is not orderly solvable (including 0).
  static DiffSystem from_expressions(const std::vector<std::pair<std::string, Expr>>& exprs,
                                     const Ranking& ranking, std::size_t unknowns);

  const std::vector<Equation>& equations() const noexcept { return equations_; }
  const Ranking& ranking() const noexcept { return ranking_; }
  std::size_t dimension() const noexcept { return ranking_.dimension(); }
  std::size_t unknowns() const noexcept { return unknowns_; }
  std::size_t size() const noexcept { return equations_.size(); }
  const Equation& operator[](std::size_t i) const { return equations_[i]; }

  const Equation* find(const std::string& name) const;
  DiffSystem with(Equation extra) const;
  DiffSystem subset(const std::vector<std::string>& names) const;

  friend bool operator==(const DiffSystem&, const DiffSystem&) = default;

 private:
  std::vector<Equation> equations_;
  Ranking ranking_;
  std::size_t unknowns_;
};

struct ReductionStep {
  JetVar target;
  std::string equation;
  MultiIndex delta;
  Expr remainder;
};

using ReductionTrace = std::vector<ReductionStep>;

struct ReduceOptions {
  std::size_t max_steps = 10000;
  /// When set, each step reduces a uniformly chosen principal coordinate
  /// instead of the highest one.
  std::optional<std::uint64_t> random_choice_seed;
};

class StepBudgetExceeded : public Error {
 public:
  StepBudgetExceeded(std::size_t budget, ReductionTrace partial)
      : Error("normal form step budget of " + std::to_string(budget) + " exceeded"),
        partial_(std::move(partial)) {}
  const ReductionTrace& partial_trace() const noexcept { return partial_; }

 private:
  ReductionTrace partial_;
};

/// D^delta of an equation's tail, memoized per delta.
class Prolongations {
 public:
  explicit Prolongations(const Equation& equation) : tail_(equation.tail) {}
  const Expr& tail(const MultiIndex& delta);

 private:
  Expr tail_;
  std::map<MultiIndex, Expr> memo_;
};

/// One reduction of F modulo eq: the highest coordinate u^i_beta of F with
/// beta = alpha + delta is replaced by -D^delta(tail). nullopt if F has no
/// such coordinate.
std::optional<std::pair<Expr, ReductionStep>> reduce_once(const Expr& f, const Equation& eq,
                                                          const Ranking& ranking);

struct NormalForm {
  Expr remainder;
  ReductionTrace trace;
};

/// Repeated reduction until F depends on no principal coordinate of S,
/// always eliminating the currently highest one (ties by equation order).
NormalForm normal_form(const Expr& f, const DiffSystem& system, const ReduceOptions& options = {});

/// Principal coordinates of S that occur in e, in ascending ranking order.
std::vector<JetVar> principal_atoms(const Expr& e, const DiffSystem& system);

/// Index of the first equation whose lead divides v, if any.
std::optional<std::size_t> generating_equation(const JetVar& v, const DiffSystem& system);

struct Monic {
  JetVar lead;
  Expr tail;
};

/// Solves r = c*u + d for its highest coordinate u when r is linear in u with
/// a coefficient c that is not zero; returns (u, d/c). Throws
/// IndeterminateError if zero-testing c is inconclusive.
std::optional<Monic> monicize(const Expr& r, const Ranking& ranking, const ZeroTestOptions& zero = {});

struct NormalizationReport {
  bool normalized = true;
  std::string witness;
};

/// Leading coordinates distinct and none a derivative of another; no tail
/// depends on a principal coordinate.
NormalizationReport is_normalized(const DiffSystem& system, const Naming& naming = {});

class AutoreduceError : public Error {
 public:
  using Error::Error;
};

struct AutoreduceOptions {
  ReduceOptions reduce;
  ZeroTestOptions zero;
};

/// Replaces equations whose lead is a derivative of another lead by their
/// monicized remainder (dropping those that reduce to zero) and every tail by
/// its normal form, until the system is normalized.
DiffSystem autoreduce(const DiffSystem& system, const AutoreduceOptions& options = {});

}  // namespace dpass
