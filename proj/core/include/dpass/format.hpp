#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dpass/expr.hpp"

namespace dpass {

/// Display names for independent variables and unknowns. Missing entries fall
/// back to x<k> and u (first unknown) / u{k}.
struct Naming {
  std::vector<std::string> independents;
  std::vector<std::string> unknowns;

  std::string independent(std::size_t axis) const;
  std::string unknown(std::size_t index) const;
};

/// Deterministic rendering in the input grammar; parse(format(e)) == e.
std::string format(const Expr& e, const Naming& naming = {});
std::string format(const JetVar& v, const Naming& naming = {});
std::string format(const Atom& a, const Naming& naming = {});

}  // namespace dpass
