#pragma once

#include <optional>
#include <vector>

#include "dpass/reduce.hpp"

namespace dpass::detail {

std::optional<std::size_t> generating_equation(const JetVar& v, const std::vector<Equation>& eqs);
std::vector<JetVar> principal_atoms(const Expr& e, const std::vector<Equation>& eqs, const Ranking& ranking);
NormalForm normal_form(const Expr& f, const std::vector<Equation>& eqs, const Ranking& ranking,
                       const ReduceOptions& options, std::vector<Prolongations>* cache);

}  // namespace dpass::detail
