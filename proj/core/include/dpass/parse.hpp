#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "dpass/expr.hpp"
#include "dpass/format.hpp"

namespace dpass {

/// Name resolution for the expression grammar:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' unary)?          integer exponents only
///   primary := number | '(' expr ')' | fn '(' expr ')' | jet | name
///            | 'D' digits '(' expr ')' | 'D' '[' ints ']' '(' expr ')'
///   jet     := unknown '[' ints ']' | 'u' '{' int '}' '[' ints ']' | unknown
///
/// fn is one of sinh cosh tanh exp log. A bare unknown name is its zero-order
/// jet coordinate. Numbers are exact: 3, 3/2 (as a quotient), 0.25.
struct ParseContext {
  Naming naming;
  std::size_t independents = 2;
  std::size_t unknowns = 1;
  std::set<std::string> constants;
  std::map<std::string, Expr> definitions;
};

Expr parse(std::string_view text, const ParseContext& context = {});

}  // namespace dpass
