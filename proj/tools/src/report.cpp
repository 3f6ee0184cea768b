#include "report.hpp"

#include <charconv>
#include <sstream>

namespace dpass::cli {

std::string number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

namespace {

Json alpha_json(const MultiIndex& alpha) {
  Json a = Json::array();
  for (unsigned k : alpha.orders()) a.push_back(k);
  return a;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Zero:
      return "zero";
    case Verdict::Promoted:
      return "promoted";
    case Verdict::Failure:
      return "failure";
  }
  return "unknown";
}

}  // namespace

std::string equation_text(const Equation& eq, const Naming& naming) {
  return format(Expr::jet(eq.lead), naming) + " = " + format(-eq.tail, naming);
}

Json to_json(const Equation& eq, const Naming& naming) {
  Json j;
  j["name"] = eq.name;
  j["lead"] = format(eq.lead, naming);
  j["tail"] = format(eq.tail, naming);
  return j;
}

Json to_json(const DiffSystem& system, const Naming& naming) {
  Json j;
  j["ranking"] = system.ranking().describe(naming);
  Json eqs = Json::array();
  for (const auto& eq : system.equations()) eqs.push_back(to_json(eq, naming));
  j["equations"] = std::move(eqs);
  return j;
}

Json to_json(const ReductionTrace& trace, const Naming& naming) {
  Json steps = Json::array();
  for (const auto& s : trace) {
    Json j;
    j["target"] = format(s.target, naming);
    j["equation"] = s.equation;
    j["delta"] = alpha_json(s.delta);
    j["remainder"] = format(s.remainder, naming);
    steps.push_back(std::move(j));
  }
  return steps;
}

Json to_json(const PairReport& pair, const Naming& naming) {
  Json j;
  j["pair"] = {pair.first, pair.second};
  j["tau"] = format(pair.tau, naming);
  j["normal_form"] = format(pair.normal_form.remainder, naming);
  j["zero"] = pair.zero;
  j["probabilistic"] = pair.probabilistic;
  j["steps"] = pair.normal_form.trace.size();
  return j;
}

Json to_json(const CompletionTrace& trace, const Naming& naming) {
  Json events = Json::array();
  for (const auto& e : trace.events) {
    Json j;
    j["generation"] = e.generation;
    j["pair"] = {e.first, e.second};
    j["tau"] = format(e.tau, naming);
    j["normal_form"] = format(e.normal_form.remainder, naming);
    j["verdict"] = verdict_name(e.verdict);
    j["probabilistic"] = e.probabilistic;
    if (e.promoted) j["promoted"] = to_json(*e.promoted, naming);
    if (!e.failure.empty()) j["failure"] = e.failure;
    j["steps"] = to_json(e.normal_form.trace, naming);
    events.push_back(std::move(j));
  }
  return events;
}

Json to_json(const SeriesSolution& solution, const Naming& naming) {
  Json j;
  j["point"] = solution.point;
  j["order"] = solution.order;
  Json rows = Json::array();
  for (const auto& [v, value] : solution.values) {
    Json r;
    r["unknown"] = naming.unknown(v.unknown);
    r["alpha"] = alpha_json(v.order);
    r["value"] = value;
    r["coefficient"] = solution.coefficients.at(v);
    rows.push_back(std::move(r));
  }
  j["table"] = std::move(rows);
  return j;
}

std::string trace_text(const ReductionTrace& trace, const Naming& naming, const std::string& indent) {
  std::ostringstream out;
  std::size_t k = 0;
  for (const auto& s : trace) {
    out << indent << ++k << ". " << format(s.target, naming) << " by " << s.equation;
    if (!s.delta.is_zero()) out << " D^" << s.delta.to_string();
    out << " -> " << format(s.remainder, naming) << '\n';
  }
  return out.str();
}

std::string completion_trace_text(const CompletionTrace& trace, const Naming& naming) {
  std::ostringstream out;
  for (const auto& e : trace.events) {
    out << "generation " << e.generation << ": tau(" << e.first << ", " << e.second << ") "
        << verdict_name(e.verdict);
    if (e.probabilistic) out << " (probabilistic)";
    if (e.promoted) out << " as " << e.promoted->name << ": " << equation_text(*e.promoted, naming);
    if (!e.failure.empty()) out << ": " << e.failure;
    out << '\n';
    out << "  tau = " << format(e.tau, naming) << '\n';
    out << trace_text(e.normal_form.trace, naming, "  ");
  }
  return out.str();
}

std::string series_csv(const SeriesSolution& solution) {
  std::ostringstream out;
  out << "unknown,alpha,value\n";
  for (const auto& [v, value] : solution.values) {
    out << v.unknown << ",\"" << v.order.to_string() << "\"," << number(value) << '\n';
  }
  return out.str();
}

}  // namespace dpass::cli
