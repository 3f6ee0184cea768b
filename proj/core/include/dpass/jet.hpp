#pragma once

#include <cstddef>
#include <optional>

#include "dpass/expr.hpp"
#include "dpass/multi_index.hpp"

namespace dpass {

/// alpha <> beta: componentwise max(alpha, beta) - alpha, the exponent that
/// lifts u_alpha to the least common derivative of u_alpha and u_beta.
MultiIndex diamond(const MultiIndex& alpha, const MultiIndex& beta);

/// delta with beta = alpha + delta, if it exists.
std::optional<MultiIndex> divisibility(const MultiIndex& alpha, const MultiIndex& beta);

/// Componentwise maximum.
MultiIndex lcm(const MultiIndex& alpha, const MultiIndex& beta);

/// Total derivative D_axis (0-based axis): d/dx_axis plus the sum over jet
/// atoms u^j_a of (de/du^j_a) u^j_{a + e_axis}.
Expr total_derivative(const Expr& e, std::size_t axis);

/// D^alpha, applying D_1 alpha_1 times, then D_2, ... in axis order.
Expr apply_power(const Expr& e, const MultiIndex& alpha);

/// D_i D_j e - D_j D_i e reduces to zero.
bool commutativity_check(const Expr& e, std::size_t i, std::size_t j);

}  // namespace dpass
