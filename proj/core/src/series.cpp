#include "dpass/series.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "dpass/format.hpp"
#include "dpass/jet.hpp"

namespace dpass {

JetClassification classify(const DiffSystem& system, unsigned horizon) {
  JetClassification c;
  c.horizon = horizon;
  for (std::size_t u = 0; u < system.unknowns(); ++u) {
    for (const auto& alpha : multi_indices_up_to(system.dimension(), horizon)) {
      JetVar v{u, alpha};
      if (auto index = generating_equation(v, system)) {
        c.principal.push_back(v);
        c.generators.emplace(v, std::pair{*index, *divisibility(system[*index].lead.order, alpha)});
      } else {
        c.parametric.push_back(v);
      }
    }
  }
  return c;
}

namespace {

double factorial(unsigned k) {
  double f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

class TableBuilder {
 public:
  TableBuilder(const DiffSystem& system, const std::vector<double>& point,
               const std::map<JetVar, double>& parametric, const SeriesOptions& options)
      : system_(system), point_(point), parametric_(parametric), options_(options) {
    for (const auto& eq : system.equations()) prolongations_.emplace_back(eq);
  }

  double value(const JetVar& v) {
    if (auto it = values_.find(v); it != values_.end()) return it->second;
    auto index = generating_equation(v, system_);
    if (!index) {
      auto it = parametric_.find(v);
      double p = it == parametric_.end() ? 0.0 : it->second;
      return values_.emplace(v, p).first->second;
    }
    const Equation& eq = system_[*index];
    MultiIndex delta = *divisibility(eq.lead.order, v.order);
    const Expr& tail = prolongations_[*index].tail(delta);
    Assignment at;
    for (const auto& a : depends_on(tail)) {
      switch (a.kind()) {
        case Atom::Kind::Independent:
          at.emplace(a, point_.at(a.axis()));
          break;
        case Atom::Kind::Jet:
          at.emplace(a, value(a.jet_var()));
          break;
        default:
          throw MissingAtomError("unbound constant '" + a.name() + "' in equation '" + eq.name + "'");
      }
    }
    double r = 0;
    try {
      r = -eval(tail, at, EvalOptions{options_.pole_epsilon});
    } catch (const PoleError& e) {
      throw SingularDataError(eq.name, std::string("hits a pole computing ") + format(v) + ": " + e.what());
    }
    if (!std::isfinite(r)) throw SingularDataError(eq.name, "produces a non-finite value for " + format(v));
    return values_.emplace(v, r).first->second;
  }

 private:
  const DiffSystem& system_;
  const std::vector<double>& point_;
  const std::map<JetVar, double>& parametric_;
  const SeriesOptions& options_;
  std::vector<Prolongations> prolongations_;
  std::map<JetVar, double> values_;
};

}  // namespace

SeriesSolution evaluate_point(const DiffSystem& system, const std::vector<double>& point,
                              const std::map<JetVar, double>& parametric, unsigned order,
                              const SeriesOptions& options) {
  if (point.size() != system.dimension()) throw std::invalid_argument("expansion point has wrong dimension");
  SeriesSolution sol;
  sol.point = point;
  sol.order = order;
  std::vector<JetVar> horizon;
  for (std::size_t u = 0; u < system.unknowns(); ++u) {
    for (const auto& alpha : multi_indices_up_to(system.dimension(), order)) horizon.push_back(JetVar{u, alpha});
  }
  if (options.shuffle_seed) {
    std::mt19937_64 rng(*options.shuffle_seed);
    std::shuffle(horizon.begin(), horizon.end(), rng);
  }
  TableBuilder builder(system, point, parametric, options);
  for (const auto& v : horizon) {
    double value = builder.value(v);
    sol.values[v] = value;
    double denom = 1;
    for (unsigned a : v.order.orders()) denom *= factorial(a);
    sol.coefficients[v] = value / denom;
  }
  return sol;
}

double SeriesSolution::derivative(const JetVar& v, const std::vector<double>& offset) const {
  if (v.order.order() > order) return 0;
  double sum = 0;
  for (const auto& [w, c] : coefficients) {
    if (w.unknown != v.unknown || !v.order.divides(w.order)) continue;
    double term = c;
    for (std::size_t k = 0; k < offset.size(); ++k) {
      unsigned g = w.order[k];
      unsigned b = v.order[k];
      for (unsigned i = 0; i < b; ++i) term *= g - i;
      term *= std::pow(offset[k], g - b);
    }
    sum += term;
  }
  return sum;
}

double residual(const std::vector<Expr>& equations, const SeriesSolution& solution,
                const std::vector<std::vector<double>>& offsets) {
  double worst = 0;
  for (const auto& h : offsets) {
    for (const auto& e : equations) {
      Assignment at;
      for (const auto& a : depends_on(e)) {
        switch (a.kind()) {
          case Atom::Kind::Independent:
            at.emplace(a, solution.point.at(a.axis()) + h.at(a.axis()));
            break;
          case Atom::Kind::Jet:
            at.emplace(a, solution.derivative(a.jet_var(), h));
            break;
          default:
            throw MissingAtomError("unbound constant '" + a.name() + "' in residual equation");
        }
      }
      worst = std::max(worst, std::abs(eval(e, at)));
    }
  }
  return worst;
}

double residual(const DiffSystem& system, const SeriesSolution& solution,
                const std::vector<std::vector<double>>& offsets) {
  std::vector<Expr> eqs;
  for (const auto& eq : system.equations()) eqs.push_back(eq.expr());
  return residual(eqs, solution, offsets);
}

std::vector<std::vector<double>> sample_offsets(std::size_t dimension, double radius) {
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < dimension; ++k) {
    for (double s : {1.0, -1.0}) {
      std::vector<double> h(dimension, 0.0);
      h[k] = s * radius;
      out.push_back(h);
    }
  }
  if (dimension > 1) {
    double r = radius / std::sqrt(static_cast<double>(dimension));
    for (std::size_t mask = 0; mask < (std::size_t{1} << dimension); ++mask) {
      std::vector<double> h(dimension);
      for (std::size_t k = 0; k < dimension; ++k) h[k] = (mask >> k & 1U) ? -r : r;
      out.push_back(h);
    }
  }
  return out;
}

double consistency_defect(const DiffSystem& system, const SeriesSolution& solution) {
  double worst = 0;
  for (const auto& eq : system.equations()) {
    Prolongations prolongation(eq);
    for (const auto& delta : multi_indices_up_to(system.dimension(), solution.order)) {
      const Expr& tail = prolongation.tail(delta);
      JetVar lead{eq.lead.unknown, eq.lead.order + delta};
      if (lead.order.order() > solution.order) continue;
      auto atoms = jet_atoms(tail);
      bool inside = std::all_of(atoms.begin(), atoms.end(),
                                [&](const JetVar& v) { return v.order.order() <= solution.order; });
      if (!inside) continue;
      Assignment at;
      for (const auto& a : depends_on(tail)) {
        if (a.kind() == Atom::Kind::Independent) {
          at.emplace(a, solution.point.at(a.axis()));
        } else if (a.kind() == Atom::Kind::Jet) {
          at.emplace(a, solution.values.at(a.jet_var()));
        }
      }
      worst = std::max(worst, std::abs(solution.values.at(lead) + eval(tail, at)));
    }
  }
  return worst;
}

// Implicit solution oracle ------------------------------------------------

namespace {

double integrand(double v) { return 1.0 / std::sqrt(std::cosh(v)); }

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = integrand(lm);
  double frm = integrand(rm);
  double left = simpson(a, m, fa, flm, fm);
  double right = simpson(m, b, fm, frm, fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

constexpr double kBracket = 60.0;

}  // namespace

double sech_root_integral(double u, double tolerance) {
  if (u == 0) return 0;
  double fa = integrand(0);
  double fb = integrand(u);
  double fm = integrand(0.5 * u);
  return adaptive_simpson(0, u, fa, fm, fb, simpson(0, u, fa, fm, fb), tolerance, 50);
}

double invert_sech_root_integral(double target) {
  double lo = -kBracket;
  double hi = kBracket;
  double g_lo = sech_root_integral(lo) - target;
  double g_hi = sech_root_integral(hi) - target;
  if (g_lo > 0 || g_hi < 0) throw Error("implicit solution: target outside the range of the integral");
  double u = 0;
  for (int iter = 0; iter < 200; ++iter) {
    double g = sech_root_integral(u) - target;
    if (std::abs(g) < 1e-14) return u;
    if (g < 0) {
      lo = u;
    } else {
      hi = u;
    }
    double next = u - g / integrand(u);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) < 1e-15 * (1 + std::abs(u))) return next;
    u = next;
  }
  throw Error("implicit solution: root finder did not converge");
}

double implicit_solution(const ImplicitRelation& relation, double t, double x) {
  if (relation.c == 0) throw std::invalid_argument("implicit solution needs c != 0");
  return invert_sech_root_integral(relation.c * x + relation.t_sign * 2.0 * t / relation.c + relation.c1);
}

double implicit_solution_check(const ImplicitRelation& relation,
                               const std::vector<std::pair<double, double>>& points, double step) {
  if (relation.c == 0) throw std::invalid_argument("implicit solution needs c != 0");
  double worst = 0;
  for (const auto& [t, x] : points) {
    auto u = [&](double tt, double xx) { return implicit_solution(relation, tt, xx); };
    double u_tx = (u(t + step, x + step) - u(t + step, x - step) - u(t - step, x + step) + u(t - step, x - step)) /
                  (4.0 * step * step);
    worst = std::max(worst, std::abs(u_tx - std::sinh(u(t, x))));
  }
  return worst;
}

}  // namespace dpass
