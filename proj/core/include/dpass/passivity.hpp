#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dpass/reduce.hpp"
#include "dpass/syzygy.hpp"

namespace dpass {

struct PassivityOptions {
  ReduceOptions reduce;
  ZeroTestOptions zero;
};

struct PairReport {
  std::string first;
  std::string second;
  Expr tau;
  NormalForm normal_form;
  bool zero = false;
  bool probabilistic = false;
};

/// tau normal form and verdict for every critical pair, in critical_pairs
/// order. Throws StepBudgetExceeded if a normal form runs out of steps.
std::vector<PairReport> check_reducibility(const DiffSystem& system, const PassivityOptions& options = {});

/// Normalized and every critical pair reduces to zero.
bool is_passive(const DiffSystem& system, const PassivityOptions& options = {});

class NotPassiveError : public Error {
 public:
  using Error::Error;
};

/// Normal form of f modulo a passive system is zero. Throws NotPassiveError
/// if the system is not passive.
bool ideal_membership(const Expr& f, const DiffSystem& system, const PassivityOptions& options = {});

struct CompletionLimits {
  std::size_t max_new_equations = 16;
  /// Total reduction steps over the whole completion.
  std::size_t max_steps = 20000;
};

enum class CompletionStatus { Passive, Incomplete, Failed };

std::string to_string(CompletionStatus status);

enum class Verdict { Zero, Promoted, Failure };

struct CompletionEvent {
  std::size_t generation = 0;
  std::string first;
  std::string second;
  Expr tau;
  NormalForm normal_form;
  Verdict verdict = Verdict::Zero;
  bool probabilistic = false;
  std::optional<Equation> promoted;
  std::string failure;
};

struct CompletionTrace {
  std::vector<CompletionEvent> events;
  std::size_t generations = 0;
};

/// Minimal cone generator of the principal coordinates.
struct Cone {
  std::size_t unknown = 0;
  MultiIndex apex;
};

struct PassivityReport {
  CompletionStatus status = CompletionStatus::Passive;
  std::string reason;
  DiffSystem system;
  CompletionTrace trace;
  std::vector<Cone> principal;
};

/// Completion loop: autoreduce, examine critical pairs in order, promote the
/// first nonzero tau normal form (monicized, named c1, c2, ...), autoreduce
/// and start over. Ends passive when every pair reduces to zero, incomplete
/// when a limit is hit, failed when a remainder is not orderly solvable or
/// depends on the independent variables only.
PassivityReport complete(const DiffSystem& system, const CompletionLimits& limits = {},
                         const PassivityOptions& options = {});

/// Re-executes the promotions recorded in a trace starting from the input
/// system; the result equals the completed system for a faithful trace.
DiffSystem replay(const DiffSystem& input, const CompletionTrace& trace, const PassivityOptions& options = {});

std::vector<Cone> principal_cones(const DiffSystem& system);

}  // namespace dpass
