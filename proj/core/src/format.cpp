#include "dpass/format.hpp"

#include "expr_impl.hpp"

namespace dpass {

std::string Naming::independent(std::size_t axis) const {
  if (axis < independents.size()) return independents[axis];
  return "x" + std::to_string(axis + 1);
}

std::string Naming::unknown(std::size_t index) const {
  if (index < unknowns.size()) return unknowns[index];
  if (index == 0) return "u";
  return "u{" + std::to_string(index + 1) + "}";
}

std::string format(const JetVar& v, const Naming& naming) {
  return naming.unknown(v.unknown) + v.order.to_string();
}

namespace {

std::string format_poly(const detail::Poly& p, const Naming& naming);

std::string power_string(const Atom& a, int k, const Naming& naming) {
  std::string s = format(a, naming);
  if (k != 1) s += "^" + std::to_string(k);
  return s;
}

// Renders |coef| * monomial; the sign is emitted by the caller.
std::string format_term(const detail::Term& t, const Naming& naming) {
  std::vector<std::string> up;
  std::vector<std::string> down;
  for (const auto& [a, k] : t.mono.powers) {
    if (k > 0) {
      up.push_back(power_string(a, k, naming));
    } else {
      down.push_back(power_string(a, -k, naming));
    }
  }
  if (!t.mono.exp.empty()) up.push_back("exp(" + format(t.mono.exp.to_expr(), naming) + ")");
  Rational c = abs(t.coef);
  std::string s;
  if (up.empty()) {
    s = c.get_str();
  } else {
    if (c != 1) s = c.get_str() + "*";
    for (std::size_t i = 0; i < up.size(); ++i) {
      if (i > 0) s += "*";
      s += up[i];
    }
  }
  for (const auto& d : down) s += "/" + d;
  return s;
}

std::string format_poly(const detail::Poly& p, const Naming& naming) {
  if (p.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    bool negative = sgn(p[i].coef) < 0;
    if (i == 0) {
      if (negative) s += "-";
    } else {
      s += negative ? " - " : " + ";
    }
    s += format_term(p[i], naming);
  }
  return s;
}

}  // namespace

std::string format(const Atom& a, const Naming& naming) {
  switch (a.kind()) {
    case Atom::Kind::Independent:
      return naming.independent(a.axis());
    case Atom::Kind::Jet:
      return format(a.jet_var(), naming);
    case Atom::Kind::Constant:
      return a.name();
    case Atom::Kind::Log:
      return "log(" + format(a.log_argument(), naming) + ")";
  }
  return {};
}

std::string format(const Expr& e, const Naming& naming) {
  const detail::Node& n = e.node();
  std::string num = format_poly(n.num, naming);
  if (n.den.empty()) return num;
  std::string s = n.num.size() > 1 ? "(" + num + ")" : num;
  std::string den;
  bool single = n.den.size() == 1 && n.den[0].multiplicity == 1;
  for (std::size_t i = 0; i < n.den.size(); ++i) {
    if (i > 0) den += "*";
    den += "(" + format_poly(n.den[i].poly, naming) + ")";
    if (n.den[i].multiplicity != 1) den += "^" + std::to_string(n.den[i].multiplicity);
  }
  return s + "/" + (single ? den : "(" + den + ")");
}

}  // namespace dpass
