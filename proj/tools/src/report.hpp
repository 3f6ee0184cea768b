#pragma once

#include <string>

#include "dpass/format.hpp"
#include "dpass/passivity.hpp"
#include "dpass/series.hpp"
#include "json.hpp"

namespace dpass::cli {

using Json = nlohmann::ordered_json;

/// Shortest decimal that reads back to the same double.
std::string number(double value);

Json to_json(const Equation& eq, const Naming& naming);
Json to_json(const DiffSystem& system, const Naming& naming);
Json to_json(const ReductionTrace& trace, const Naming& naming);
Json to_json(const PairReport& pair, const Naming& naming);
Json to_json(const CompletionTrace& trace, const Naming& naming);
Json to_json(const SeriesSolution& solution, const Naming& naming);

std::string equation_text(const Equation& eq, const Naming& naming);
std::string trace_text(const ReductionTrace& trace, const Naming& naming, const std::string& indent);
std::string completion_trace_text(const CompletionTrace& trace, const Naming& naming);
/// CSV rows (unknown index, alpha, value) in table order.
std::string series_csv(const SeriesSolution& solution);

}  // namespace dpass::cli
