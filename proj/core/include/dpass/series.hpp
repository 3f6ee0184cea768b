#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpass/reduce.hpp"

namespace dpass {

/// Partition of the jet coordinates of order <= horizon into principal ones
/// (derivatives of a leading coordinate) and parametric ones.
struct JetClassification {
  unsigned horizon = 0;
  std::vector<JetVar> principal;
  std::vector<JetVar> parametric;
  /// For each principal coordinate: index of the first generating equation
  /// and the delta with lead + delta = coordinate.
  std::map<JetVar, std::pair<std::size_t, MultiIndex>> generators;

  bool is_principal(const JetVar& v) const { return generators.contains(v); }
};

JetClassification classify(const DiffSystem& system, unsigned horizon);

/// Jet values at one point and the Taylor polynomial they define.
struct SeriesSolution {
  std::vector<double> point;
  unsigned order = 0;
  /// u^i_alpha at the point for every |alpha| <= order and every unknown.
  std::map<JetVar, double> values;
  /// values / alpha!
  std::map<JetVar, double> coefficients;

  /// D^beta of the Taylor polynomial of unknown `unknown`, at point + offset.
  double derivative(const JetVar& v, const std::vector<double>& offset) const;
};

class SingularDataError : public Error {
 public:
  SingularDataError(const std::string& equation, const std::string& detail)
      : Error("singular data: equation '" + equation + "' " + detail), equation_(equation) {}
  const std::string& equation() const noexcept { return equation_; }

 private:
  std::string equation_;
};

struct SeriesOptions {
  double pole_epsilon = 1e-12;
  /// Evaluate the horizon coordinates in a shuffled order (the table must
  /// not depend on it).
  std::optional<std::uint64_t> shuffle_seed;
};

/// Principal values are forced: u^i_{alpha+delta}(b) = -D^delta(tail)(b).
/// Parametric coordinates missing from `parametric` are taken as zero.
/// Throws SingularDataError when a generating equation hits a pole.
SeriesSolution evaluate_point(const DiffSystem& system, const std::vector<double>& point,
                              const std::map<JetVar, double>& parametric, unsigned order,
                              const SeriesOptions& options = {});

/// Maximum |e| over the equations evaluated on the Taylor polynomial's
/// derivatives at point + offset for every offset.
double residual(const std::vector<Expr>& equations, const SeriesSolution& solution,
                const std::vector<std::vector<double>>& offsets);
double residual(const DiffSystem& system, const SeriesSolution& solution,
                const std::vector<std::vector<double>>& offsets);

/// 2n axis points and 2^n diagonal points, all at distance radius.
std::vector<std::vector<double>> sample_offsets(std::size_t dimension, double radius);

/// Largest |D^delta(equation)| over the table for every equation and every
/// delta whose prolongation only needs coordinates of order <= table order.
double consistency_defect(const DiffSystem& system, const SeriesSolution& solution);

// Implicit travelling-wave solutions of u_tx = sinh u ----------------------

/// G(u) = integral_0^u dv / sqrt(cosh v), adaptive Simpson.
double sech_root_integral(double u, double tolerance = 1e-12);

/// Solves G(u) = target with safeguarded Newton. Throws Error when the
/// target is outside the range of G or the iteration fails.
double invert_sech_root_integral(double target);

struct ImplicitRelation {
  double c = 1;
  double c1 = 0;
  /// Sign in front of 2t/c: G(u) = c x + sign * 2 t / c + c1.
  double t_sign = -1;
};

/// u(t, x) from the implicit relation (axis 1 is t, axis 2 is x).
double implicit_solution(const ImplicitRelation& relation, double t, double x);

/// Max |u_tx - sinh u| over the points, u_tx by the central difference with
/// the given step. Throws std::invalid_argument for c == 0.
double implicit_solution_check(const ImplicitRelation& relation,
                               const std::vector<std::pair<double, double>>& points, double step = 1e-3);

}  // namespace dpass
