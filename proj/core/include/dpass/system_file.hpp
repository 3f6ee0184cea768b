#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dpass/parse.hpp"
#include "dpass/reduce.hpp"

namespace dpass {

/// Text form of a differential system:
///
///   # comment
///   vars x1 x2
///   unknowns u
///   ranking elim(x1) degrevlex
///   const r s            (or const r=-1/2)
///   f: u[1,1] - sinh(u);
///   g: u[0,3] = 1/2*u[0,1]^3;
///
/// Header lines come first; each starts with its keyword. An equation is
/// `name: expr;` or `name: lhs = rhs;` and may span lines. Missing headers
/// default to vars x1 x2, unknowns u and elim(x1) degrevlex.
struct SystemFile {
  std::vector<std::string> vars{"x1", "x2"};
  std::vector<std::string> unknowns{"u"};
  Ranking ranking = Ranking::default_for(2);
  /// Declared constants in header order; bound ones carry their value.
  std::vector<std::string> constants;
  std::map<std::string, Rational> bindings;
  std::vector<std::pair<std::string, Expr>> equations;

  Naming naming() const { return Naming{vars, unknowns}; }
  ParseContext context() const;
};

/// Diagnostic with a 1-based line and column.
class SystemFileError : public Error {
 public:
  SystemFileError(const std::string& message, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

SystemFile parse_system_file(std::string_view text);
/// Reads and parses a file; throws Error if it cannot be opened.
SystemFile load_system_file(const std::string& path);

/// Substitutes the values for declared constants. Throws Error for names that
/// are not declared constants.
SystemFile bind_constants(SystemFile file, const std::map<std::string, Rational>& values);

/// Parses "name=value" with an exact rational value such as -1/2 or 0.5.
std::pair<std::string, Rational> parse_binding(std::string_view text);

/// Solves every equation for its leading coordinate. An equation whose top
/// coordinate occurs linearly with a nonzero coefficient is divided through
/// by it first. Throws InvalidSystemError naming the equation otherwise.
DiffSystem to_system(const SystemFile& file);

/// Extra expression in the file's names (constants and bindings included).
Expr parse_in(const SystemFile& file, std::string_view text);

/// Writes a system with the file's header; parse_system_file round-trips it.
std::string write_system_file(const DiffSystem& system, const SystemFile& header);

}  // namespace dpass
