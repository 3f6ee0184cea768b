#include "dpass/passivity.hpp"

#include <algorithm>

#include "dpass/format.hpp"

namespace dpass {

std::string to_string(CompletionStatus status) {
  switch (status) {
    case CompletionStatus::Passive:
      return "passive";
    case CompletionStatus::Incomplete:
      return "incomplete";
    case CompletionStatus::Failed:
      return "failed";
  }
  return "unknown";
}

std::vector<PairReport> check_reducibility(const DiffSystem& system, const PassivityOptions& options) {
  std::vector<PairReport> out;
  for (const auto& [i, j] : critical_pairs(system)) {
    PairReport r;
    r.first = system[i].name;
    r.second = system[j].name;
    r.tau = tau(system[i], system[j]);
    r.normal_form = normal_form(r.tau, system, options.reduce);
    ZeroVerdict v = zero_test(r.normal_form.remainder, options.zero);
    r.zero = v.zero;
    r.probabilistic = v.probabilistic;
    out.push_back(std::move(r));
  }
  return out;
}

bool is_passive(const DiffSystem& system, const PassivityOptions& options) {
  if (!is_normalized(system).normalized) return false;
  for (const auto& r : check_reducibility(system, options)) {
    if (!r.zero) return false;
  }
  return true;
}

bool ideal_membership(const Expr& f, const DiffSystem& system, const PassivityOptions& options) {
  if (!is_passive(system, options)) throw NotPassiveError("ideal membership requires a passive system");
  return zero_test(normal_form(f, system, options.reduce).remainder, options.zero).zero;
}

std::vector<Cone> principal_cones(const DiffSystem& system) {
  std::vector<Cone> cones;
  for (const auto& eq : system.equations()) {
    bool minimal = true;
    for (const auto& other : system.equations()) {
      if (&other == &eq || other.lead.unknown != eq.lead.unknown) continue;
      if (other.lead.order.divides(eq.lead.order) && other.lead.order != eq.lead.order) minimal = false;
    }
    if (minimal) cones.push_back(Cone{eq.lead.unknown, eq.lead.order});
  }
  return cones;
}

namespace {

AutoreduceOptions autoreduce_options(const PassivityOptions& options) {
  return AutoreduceOptions{options.reduce, options.zero};
}

}  // namespace

PassivityReport complete(const DiffSystem& input, const CompletionLimits& limits, const PassivityOptions& options) {
  PassivityReport report{CompletionStatus::Passive, {}, input, {}, {}};
  auto finish = [&](CompletionStatus status, std::string reason) {
    report.status = status;
    report.reason = std::move(reason);
    report.principal = principal_cones(report.system);
    return report;
  };

  try {
    report.system = autoreduce(input, autoreduce_options(options));
  } catch (const AutoreduceError& e) {
    return finish(CompletionStatus::Failed, e.what());
  } catch (const StepBudgetExceeded& e) {
    return finish(CompletionStatus::Incomplete, e.what());
  }

  std::size_t steps_used = 0;
  std::size_t promotions = 0;
  while (true) {
    report.trace.generations += 1;
    bool promoted = false;
    for (const auto& [i, j] : critical_pairs(report.system)) {
      const DiffSystem& sys = report.system;
      CompletionEvent event;
      event.generation = report.trace.generations;
      event.first = sys[i].name;
      event.second = sys[j].name;
      event.tau = tau(sys[i], sys[j]);
      ReduceOptions reduce = options.reduce;
      reduce.max_steps = std::min(reduce.max_steps, limits.max_steps - std::min(steps_used, limits.max_steps));
      try {
        event.normal_form = normal_form(event.tau, sys, reduce);
      } catch (const StepBudgetExceeded& e) {
        event.verdict = Verdict::Failure;
        event.normal_form = NormalForm{e.partial_trace().empty() ? event.tau : e.partial_trace().back().remainder,
                                       e.partial_trace()};
        event.failure = "step budget exhausted";
        report.trace.events.push_back(std::move(event));
        return finish(CompletionStatus::Incomplete,
                      "step budget exhausted while reducing tau(" + sys[i].name + ", " + sys[j].name + ")");
      }
      steps_used += event.normal_form.trace.size();
      ZeroVerdict v = zero_test(event.normal_form.remainder, options.zero);
      event.probabilistic = v.probabilistic;
      if (v.zero) {
        event.verdict = Verdict::Zero;
        report.trace.events.push_back(std::move(event));
        continue;
      }
      const Expr& r = event.normal_form.remainder;
      if (jet_atoms(r).empty()) {
        event.verdict = Verdict::Failure;
        event.failure = "remainder depends on independent variables only";
        std::string reason = "inconsistent system: tau(" + event.first + ", " + event.second +
                             ") reduces to " + format(r);
        report.trace.events.push_back(std::move(event));
        return finish(CompletionStatus::Failed, reason);
      }
      if (promotions >= limits.max_new_equations) {
        event.verdict = Verdict::Failure;
        event.failure = "new-equation limit reached";
        std::string reason = "limit of " + std::to_string(limits.max_new_equations) +
                             " new equations reached at tau(" + event.first + ", " + event.second + ")";
        report.trace.events.push_back(std::move(event));
        return finish(CompletionStatus::Incomplete, reason);
      }
      auto monic = monicize(r, sys.ranking(), options.zero);
      if (!monic) {
        event.verdict = Verdict::Failure;
        event.failure = "remainder is not orderly solvable";
        std::string reason = "tau(" + event.first + ", " + event.second +
                             ") reduces to a remainder that is not orderly solvable: " + format(r);
        report.trace.events.push_back(std::move(event));
        return finish(CompletionStatus::Failed, reason);
      }
      promotions += 1;
      std::string name = "c" + std::to_string(promotions);
      while (sys.find(name)) name += "'";
      Equation eq{name, monic->lead, monic->tail};
      event.verdict = Verdict::Promoted;
      event.promoted = eq;
      report.trace.events.push_back(std::move(event));
      try {
        // The remainder is in normal form, so its lead is not principal and
        // cannot collide with an existing lead.
        report.system = autoreduce(sys.with(eq), autoreduce_options(options));
      } catch (const AutoreduceError& e) {
        return finish(CompletionStatus::Failed, e.what());
      } catch (const InvalidSystemError& e) {
        return finish(CompletionStatus::Failed, e.what());
      } catch (const StepBudgetExceeded& e) {
        return finish(CompletionStatus::Incomplete, e.what());
      }
      promoted = true;
      break;
    }
    if (!promoted) return finish(CompletionStatus::Passive, {});
  }
}

DiffSystem replay(const DiffSystem& input, const CompletionTrace& trace, const PassivityOptions& options) {
  DiffSystem sys = autoreduce(input, autoreduce_options(options));
  for (const auto& event : trace.events) {
    if (event.verdict != Verdict::Promoted) continue;
    const Equation* a = sys.find(event.first);
    const Equation* b = sys.find(event.second);
    if (!a || !b) throw Error("replay: trace refers to a missing equation");
    Expr r = normal_form(tau(*a, *b), sys, options.reduce).remainder;
    auto monic = monicize(r, sys.ranking(), options.zero);
    if (!monic) throw Error("replay: recorded promotion is not orderly solvable");
    sys = autoreduce(sys.with(Equation{event.promoted->name, monic->lead, monic->tail}),
                     autoreduce_options(options));
  }
  return sys;
}

}  // namespace dpass
