#include "dpass/expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <set>

#include "dpass/error.hpp"
#include "expr_impl.hpp"

namespace dpass {
namespace detail {

namespace {

int sign_of(const Rational& q) { return sgn(q); }

int compare_rational(const Rational& a, const Rational& b) {
  int c = cmp(a, b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace

// ExpArg ------------------------------------------------------------------

Expr ExpArg::to_expr() const {
  Expr e;
  for (const auto& [basis, coef] : parts) e += basis * Expr(coef);
  return e;
}

int compare_exp(const ExpArg& a, const ExpArg& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.parts.size() || j < b.parts.size()) {
    if (j == b.parts.size() || (i < a.parts.size() && a.parts[i].first < b.parts[j].first)) {
      return sign_of(a.parts[i].second);
    }
    if (i == a.parts.size() || b.parts[j].first < a.parts[i].first) {
      return -sign_of(b.parts[j].second);
    }
    if (int c = compare_rational(a.parts[i].second, b.parts[j].second); c != 0) return c;
    ++i;
    ++j;
  }
  return 0;
}

int compare_mono(const Monomial& a, const Monomial& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.powers.size() || j < b.powers.size()) {
    if (j == b.powers.size() || (i < a.powers.size() && a.powers[i].first < b.powers[j].first)) {
      return a.powers[i].second > 0 ? 1 : -1;
    }
    if (i == a.powers.size() || b.powers[j].first < a.powers[i].first) {
      return b.powers[j].second > 0 ? -1 : 1;
    }
    if (a.powers[i].second != b.powers[j].second) {
      return a.powers[i].second < b.powers[j].second ? -1 : 1;
    }
    ++i;
    ++j;
  }
  return compare_exp(a.exp, b.exp);
}

int compare_poly(const Poly& a, const Poly& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare_mono(a[i].mono, b[i].mono); c != 0) return c;
    if (int c = compare_rational(a[i].coef, b[i].coef); c != 0) return c;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

int compare_node(const Node& a, const Node& b) {
  if (int c = compare_poly(a.num, b.num); c != 0) return c;
  if (a.den.size() != b.den.size()) return a.den.size() < b.den.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.den.size(); ++i) {
    if (int c = compare_poly(a.den[i].poly, b.den[i].poly); c != 0) return c;
    if (a.den[i].multiplicity != b.den[i].multiplicity) {
      return a.den[i].multiplicity < b.den[i].multiplicity ? -1 : 1;
    }
  }
  return 0;
}

// Monomials ---------------------------------------------------------------

ExpArg add_exp(const ExpArg& a, const ExpArg& b, int sign) {
  ExpArg r;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.parts.size() || j < b.parts.size()) {
    if (j == b.parts.size() || (i < a.parts.size() && a.parts[i].first < b.parts[j].first)) {
      r.parts.push_back(a.parts[i++]);
    } else if (i == a.parts.size() || b.parts[j].first < a.parts[i].first) {
      r.parts.emplace_back(b.parts[j].first, sign * b.parts[j].second);
      ++j;
    } else {
      Rational c = a.parts[i].second + sign * b.parts[j].second;
      if (sgn(c) != 0) r.parts.emplace_back(a.parts[i].first, c);
      ++i;
      ++j;
    }
  }
  return r;
}

namespace {

Powers merge_powers(const Powers& a, const Powers& b, int sign) {
  Powers r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      r.emplace_back(b[j].first, sign * b[j].second);
      ++j;
    } else {
      int e = a[i].second + sign * b[j].second;
      if (e != 0) r.emplace_back(a[i].first, e);
      ++i;
      ++j;
    }
  }
  return r;
}

}  // namespace

Monomial mul_mono(const Monomial& a, const Monomial& b) {
  if (b.is_one()) return a;
  if (a.is_one()) return b;
  return Monomial{merge_powers(a.powers, b.powers, 1), add_exp(a.exp, b.exp, 1)};
}

Monomial div_mono(const Monomial& a, const Monomial& b) {
  if (b.is_one()) return a;
  return Monomial{merge_powers(a.powers, b.powers, -1), add_exp(a.exp, b.exp, -1)};
}

Monomial inverse_mono(const Monomial& a) { return div_mono(Monomial{}, a); }

// Polynomials -------------------------------------------------------------

Poly poly_constant(const Rational& c) {
  if (sgn(c) == 0) return {};
  return Poly{Term{Monomial{}, c}};
}

Poly poly_add(const Poly& a, const Poly& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  Poly r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    int c = compare_mono(a[i].mono, b[j].mono);
    if (c > 0) {
      r.push_back(a[i++]);
    } else if (c < 0) {
      r.push_back(b[j++]);
    } else {
      Rational s = a[i].coef + b[j].coef;
      if (sgn(s) != 0) r.push_back(Term{a[i].mono, s});
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) r.push_back(a[i]);
  for (; j < b.size(); ++j) r.push_back(b[j]);
  return r;
}

Poly poly_neg(Poly a) {
  for (auto& t : a) t.coef = -t.coef;
  return a;
}

Poly poly_sub(const Poly& a, const Poly& b) { return poly_add(a, poly_neg(b)); }

Poly poly_scale(Poly a, const Rational& c, const Monomial& m) {
  if (sgn(c) == 0) return {};
  for (auto& t : a) {
    t.coef *= c;
    if (!m.is_one()) t.mono = mul_mono(t.mono, m);
  }
  return a;
}

namespace {

// poly_add that consumes its operands.
Poly merge(Poly&& a, Poly&& b) {
  if (a.empty()) return std::move(b);
  if (b.empty()) return std::move(a);
  Poly r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    int c = compare_mono(a[i].mono, b[j].mono);
    if (c > 0) {
      r.push_back(std::move(a[i++]));
    } else if (c < 0) {
      r.push_back(std::move(b[j++]));
    } else {
      a[i].coef += b[j].coef;
      if (sgn(a[i].coef) != 0) r.push_back(std::move(a[i]));
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) r.push_back(std::move(a[i]));
  for (; j < b.size(); ++j) r.push_back(std::move(b[j]));
  return r;
}

// Sums a list of sorted polynomials by pairwise merging.
Poly merge_all(std::vector<Poly>& parts) {
  if (parts.empty()) return {};
  while (parts.size() > 1) {
    std::size_t half = (parts.size() + 1) / 2;
    for (std::size_t k = 0; k + half < parts.size(); ++k) parts[k] = merge(std::move(parts[k]), std::move(parts[k + half]));
    parts.resize(half);
  }
  return std::move(parts.front());
}

// Sparse accumulator in the same (descending) monomial order as Poly.
struct MonoDescending {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare_mono(a, b) > 0; }
};
using Accumulator = std::map<Monomial, Rational, MonoDescending>;

void accumulate(Accumulator& acc, const Monomial& m, const Rational& c) {
  auto [it, inserted] = acc.try_emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (sgn(it->second) == 0) acc.erase(it);
}

Poly to_poly(const Accumulator& acc) {
  Poly r;
  r.reserve(acc.size());
  for (const auto& [m, c] : acc) r.push_back(Term{m, c});
  return r;
}

}  // namespace

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  if (a.size() == 1) return poly_scale(b, a[0].coef, a[0].mono);
  if (b.size() == 1) return poly_scale(a, b[0].coef, b[0].mono);
  // The order is multiplicative, so each row s*b is already sorted; merge
  // the rows pairwise.
  const Poly& outer = a.size() <= b.size() ? a : b;
  const Poly& inner = a.size() <= b.size() ? b : a;
  std::vector<Poly> rows;
  rows.reserve(outer.size());
  for (const auto& s : outer) rows.push_back(poly_scale(inner, s.coef, s.mono));
  return merge_all(rows);
}

Poly poly_pow(const Poly& a, unsigned k) {
  Poly result = poly_constant(1);
  Poly base = a;
  while (k > 0) {
    if (k & 1U) result = poly_mul(result, base);
    k >>= 1U;
    if (k > 0) base = poly_mul(base, base);
  }
  return result;
}

namespace {

// Per-coordinate exponent ranges. Exponent ranges are additive under
// multiplication of Laurent polynomials, which bounds the quotient.
struct DegreeBox {
  std::map<Atom, std::pair<int, int>> powers;
  std::map<Expr, std::pair<Rational, Rational>> exps;
};

DegreeBox degree_box(const Poly& p) {
  // One pass; a coordinate missing from some term also spans exponent 0.
  DegreeBox box;
  std::map<Atom, std::size_t> power_seen;
  std::map<Expr, std::size_t> exp_seen;
  for (const auto& t : p) {
    for (const auto& [a, e] : t.mono.powers) {
      auto [it, fresh] = box.powers.try_emplace(a, e, e);
      if (!fresh) it->second = {std::min(it->second.first, e), std::max(it->second.second, e)};
      ++power_seen[a];
    }
    for (const auto& [b, c] : t.mono.exp.parts) {
      auto [it, fresh] = box.exps.try_emplace(b, c, c);
      if (!fresh) it->second = {std::min(it->second.first, c), std::max(it->second.second, c)};
      ++exp_seen[b];
    }
  }
  for (auto& [a, range] : box.powers) {
    if (power_seen[a] < p.size()) range = {std::min(range.first, 0), std::max(range.second, 0)};
  }
  for (auto& [b, range] : box.exps) {
    if (exp_seen[b] < p.size()) {
      if (range.first > 0) range.first = 0;
      if (range.second < 0) range.second = 0;
    }
  }
  return box;
}

struct QuotientBox {
  std::map<Atom, std::pair<int, int>> powers;
  std::map<Expr, std::pair<Rational, Rational>> exps;
  bool empty = false;

  bool contains(const Monomial& m) const {
    for (const auto& [a, e] : m.powers) {
      if (!powers.contains(a)) return false;
    }
    for (const auto& [b, c] : m.exp.parts) {
      if (!exps.contains(b)) return false;
    }
    for (const auto& [a, range] : powers) {
      int e = 0;
      for (const auto& [b, k] : m.powers) {
        if (b == a) e = k;
      }
      if (e < range.first || e > range.second) return false;
    }
    for (const auto& [basis, range] : exps) {
      Rational e = 0;
      for (const auto& [b, c] : m.exp.parts) {
        if (b == basis) e = c;
      }
      if (e < range.first || e > range.second) return false;
    }
    return true;
  }
};

QuotientBox quotient_box(const Poly& a, const Poly& b) {
  DegreeBox ba = degree_box(a);
  DegreeBox bb = degree_box(b);
  QuotientBox q;
  auto range_of = [](const auto& box, const auto& key, auto zero) {
    auto it = box.find(key);
    return it == box.end() ? std::pair{zero, zero} : it->second;
  };
  for (const auto& [atom, ra] : ba.powers) {
    auto rb = range_of(bb.powers, atom, 0);
    q.powers[atom] = {ra.first - rb.first, ra.second - rb.second};
  }
  for (const auto& [atom, rb] : bb.powers) {
    if (q.powers.contains(atom)) continue;
    q.powers[atom] = {-rb.first, -rb.second};
  }
  for (const auto& [basis, ra] : ba.exps) {
    auto rb = range_of(bb.exps, basis, Rational(0));
    q.exps[basis] = {ra.first - rb.first, ra.second - rb.second};
  }
  for (const auto& [basis, rb] : bb.exps) {
    if (q.exps.contains(basis)) continue;
    q.exps[basis] = {-rb.first, -rb.second};
  }
  for (const auto& [atom, r] : q.powers) {
    if (r.first > r.second) q.empty = true;
  }
  for (const auto& [basis, r] : q.exps) {
    if (r.first > r.second) q.empty = true;
  }
  return q;
}

}  // namespace

std::optional<Poly> poly_divide(const Poly& a, const Poly& b) {
  if (b.empty()) throw DivisionByZero();
  if (a.empty()) return Poly{};
  if (b.size() == 1) {
    Monomial inv = inverse_mono(b[0].mono);
    return poly_scale(a, 1 / b[0].coef, inv);
  }
  if (a.size() < 2) return std::nullopt;
  QuotientBox box = quotient_box(a, b);
  if (box.empty) return std::nullopt;
  Monomial lowest = div_mono(a.back().mono, b.back().mono);
  Accumulator remainder;
  for (const auto& t : a) remainder.emplace_hint(remainder.end(), t.mono, t.coef);
  Poly quotient;
  constexpr std::size_t kMaxIterations = 100000;
  for (std::size_t iter = 0; !remainder.empty(); ++iter) {
    if (iter > kMaxIterations) return std::nullopt;
    const auto& [top, top_coef] = *remainder.begin();
    Monomial m = div_mono(top, b.front().mono);
    if (compare_mono(m, lowest) < 0 || !box.contains(m)) return std::nullopt;
    Rational c = top_coef / b.front().coef;
    remainder.erase(remainder.begin());
    for (std::size_t k = 1; k < b.size(); ++k) accumulate(remainder, mul_mono(b[k].mono, m), -c * b[k].coef);
    quotient.push_back(Term{std::move(m), std::move(c)});
  }
  return quotient;
}

Normalized normalize(const Poly& a) {
  Normalized r;
  std::map<Atom, int> mins;
  for (const auto& t : a) {
    for (const auto& [atom, e] : t.mono.powers) mins.emplace(atom, 0);
  }
  for (auto& [atom, m] : mins) {
    bool first = true;
    for (const auto& t : a) {
      int e = 0;
      for (const auto& [b, k] : t.mono.powers) {
        if (b == atom) e = k;
      }
      if (first || e < m) m = e;
      first = false;
    }
  }
  for (const auto& [atom, m] : mins) {
    if (m != 0) r.unit.powers.emplace_back(atom, m);
  }
  r.unit.exp = a.front().mono.exp;

  mpz_class g = 0;
  mpz_class l = 1;
  for (const auto& t : a) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coef.get_den_mpz_t());
  }
  r.coef = Rational(g, l);
  r.coef.canonicalize();
  if (sgn(a.front().coef) < 0) r.coef = -r.coef;
  r.poly = poly_scale(a, 1 / r.coef, inverse_mono(r.unit));
  return r;
}

// Nodes -------------------------------------------------------------------

namespace {

void add_factor(std::vector<Factor>& den, const Poly& f, int multiplicity) {
  for (auto& existing : den) {
    if (compare_poly(existing.poly, f) == 0) {
      existing.multiplicity += multiplicity;
      return;
    }
  }
  den.push_back(Factor{f, multiplicity});
}

void cancel(Poly& num, std::vector<Factor>& den) {
  for (auto& f : den) {
    while (f.multiplicity > 0 && !num.empty()) {
      auto q = poly_divide(num, f.poly);
      if (!q) break;
      num = std::move(*q);
      --f.multiplicity;
    }
  }
  std::erase_if(den, [](const Factor& f) { return f.multiplicity == 0; });
}

const std::shared_ptr<const Node>& zero_node() {
  static const auto node = std::make_shared<const Node>();
  return node;
}

// Splits a raw denominator into known factors (by trial division) plus a
// normalized cofactor, moving units into the numerator.
void absorb_denominator(Poly& num, std::vector<Factor>& den, const Poly& raw,
                        const std::vector<Factor>& candidates) {
  if (raw.empty()) throw DivisionByZero();
  Normalized n = normalize(raw);
  num = poly_scale(std::move(num), 1 / n.coef, inverse_mono(n.unit));
  Poly rest = std::move(n.poly);
  for (const auto& c : candidates) {
    while (rest.size() > 1) {
      auto q = poly_divide(rest, c.poly);
      if (!q) break;
      add_factor(den, c.poly, 1);
      Normalized nq = normalize(*q);
      num = poly_scale(std::move(num), 1 / nq.coef, inverse_mono(nq.unit));
      rest = std::move(nq.poly);
    }
  }
  if (rest.size() > 1) add_factor(den, rest, 1);
}

}  // namespace

std::shared_ptr<const Node> make_node(Poly num, std::vector<Factor> den) {
  if (num.empty()) return zero_node();
  std::sort(den.begin(), den.end(),
            [](const Factor& a, const Factor& b) { return compare_poly(a.poly, b.poly) < 0; });
  auto node = std::make_shared<Node>();
  node->num = std::move(num);
  node->den = std::move(den);
  return node;
}

Expr from_poly(Poly p) { return Expr(make_node(std::move(p), {})); }

Expr reciprocal_of_factor(const Poly& normalized_factor, int multiplicity) {
  return Expr(make_node(poly_constant(1), {Factor{normalized_factor, multiplicity}}));
}

Poly expand_factors(const std::vector<Factor>& factors) {
  Poly r = poly_constant(1);
  for (const auto& f : factors) r = poly_mul(r, poly_pow(f.poly, static_cast<unsigned>(f.multiplicity)));
  return r;
}

Expr quotient(Poly num, const Poly& den, const std::vector<Factor>& candidates) {
  std::vector<Factor> factors;
  absorb_denominator(num, factors, den, candidates);
  cancel(num, factors);
  return Expr(make_node(std::move(num), std::move(factors)));
}

Expr sum(const std::vector<Expr>& terms) {
  std::vector<Factor> lcm;
  for (const auto& t : terms) {
    for (const auto& f : t.node().den) {
      auto it = std::find_if(lcm.begin(), lcm.end(), [&](const Factor& g) { return compare_poly(g.poly, f.poly) == 0; });
      if (it == lcm.end()) {
        lcm.push_back(f);
      } else {
        it->multiplicity = std::max(it->multiplicity, f.multiplicity);
      }
    }
  }
  std::vector<Poly> parts;
  parts.reserve(terms.size());
  for (const auto& t : terms) {
    if (t.is_zero_literal()) continue;
    std::vector<Factor> missing;
    for (const auto& f : lcm) {
      int have = 0;
      for (const auto& g : t.node().den) {
        if (compare_poly(g.poly, f.poly) == 0) have = g.multiplicity;
      }
      if (f.multiplicity > have) missing.push_back(Factor{f.poly, f.multiplicity - have});
    }
    parts.push_back(missing.empty() ? t.node().num : poly_mul(t.node().num, expand_factors(missing)));
  }
  Poly num = merge_all(parts);
  if (num.empty()) return Expr();
  cancel(num, lcm);
  return Expr(make_node(std::move(num), std::move(lcm)));
}

}  // namespace detail

using detail::Factor;
using detail::Monomial;
using detail::Node;
using detail::Poly;
using detail::Term;

// Expr --------------------------------------------------------------------

Expr::Expr() : node_(detail::make_node({}, {})) {}

Expr::Expr(long value) : Expr(Rational(value)) {}

Expr::Expr(const Rational& value) {
  Rational q = value;
  q.canonicalize();
  node_ = detail::make_node(detail::poly_constant(q), {});
}

Expr Expr::atom(const Atom& a) {
  return detail::from_poly(Poly{Term{Monomial{{{a, 1}}, {}}, Rational(1)}});
}

Expr Expr::independent(std::size_t axis) { return atom(Atom::independent(axis)); }
Expr Expr::jet(const JetVar& v) { return atom(Atom::jet(v)); }
Expr Expr::jet(std::size_t unknown, MultiIndex order) {
  return atom(Atom::jet(JetVar{unknown, std::move(order)}));
}
Expr Expr::constant(const std::string& name) { return atom(Atom::constant(name)); }

bool Expr::is_zero_literal() const noexcept { return node_->num.empty(); }

std::optional<Rational> Expr::as_rational() const {
  if (node_->num.empty()) return Rational(0);
  if (node_->num.size() == 1 && node_->den.empty() && node_->num[0].mono.is_one()) {
    return node_->num[0].coef;
  }
  return std::nullopt;
}

bool Expr::has_denominator() const noexcept { return !node_->den.empty(); }

std::size_t Expr::term_count() const noexcept { return node_->num.size(); }

Expr Expr::operator-() const {
  if (is_zero_literal()) return *this;
  return Expr(detail::make_node(detail::poly_neg(node_->num), node_->den));
}

Expr& Expr::operator+=(const Expr& other) {
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (b.num.empty()) return *this;
  if (a.num.empty()) return *this = other;
  if (a.den.empty() && b.den.empty()) {
    node_ = detail::make_node(detail::poly_add(a.num, b.num), {});
    return *this;
  }
  std::vector<Factor> lcm = a.den;
  for (const auto& f : b.den) {
    auto it = std::find_if(lcm.begin(), lcm.end(), [&](const Factor& g) {
      return detail::compare_poly(g.poly, f.poly) == 0;
    });
    if (it == lcm.end()) {
      lcm.push_back(f);
    } else {
      it->multiplicity = std::max(it->multiplicity, f.multiplicity);
    }
  }
  auto cofactor = [&](const std::vector<Factor>& own) {
    std::vector<Factor> missing;
    for (const auto& f : lcm) {
      int have = 0;
      for (const auto& g : own) {
        if (detail::compare_poly(g.poly, f.poly) == 0) have = g.multiplicity;
      }
      if (f.multiplicity > have) missing.push_back(Factor{f.poly, f.multiplicity - have});
    }
    return detail::expand_factors(missing);
  };
  Poly num = detail::poly_add(detail::poly_mul(a.num, cofactor(a.den)),
                              detail::poly_mul(b.num, cofactor(b.den)));
  if (num.empty()) return *this = Expr();
  detail::cancel(num, lcm);
  node_ = detail::make_node(std::move(num), std::move(lcm));
  return *this;
}

Expr& Expr::operator-=(const Expr& other) { return *this += -other; }

Expr& Expr::operator*=(const Expr& other) {
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.num.empty()) return *this;
  if (b.num.empty()) return *this = other;
  if (a.den.empty() && b.den.empty()) {
    node_ = detail::make_node(detail::poly_mul(a.num, b.num), {});
    return *this;
  }
  Poly an = a.num;
  Poly bn = b.num;
  std::vector<Factor> ad = a.den;
  std::vector<Factor> bd = b.den;
  detail::cancel(an, bd);
  detail::cancel(bn, ad);
  for (const auto& f : bd) detail::add_factor(ad, f.poly, f.multiplicity);
  node_ = detail::make_node(detail::poly_mul(an, bn), std::move(ad));
  return *this;
}

Expr& Expr::operator/=(const Expr& other) {
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (b.num.empty()) throw DivisionByZero();
  if (a.num.empty()) return *this;
  if (b.den.empty() && b.num.size() == 1) {
    const Term& t = b.num[0];
    node_ = detail::make_node(detail::poly_scale(a.num, 1 / t.coef, detail::inverse_mono(t.mono)), a.den);
    return *this;
  }
  std::vector<Factor> ad = a.den;
  std::vector<Factor> bd = b.den;
  for (auto& f : bd) {
    for (auto& g : ad) {
      if (detail::compare_poly(g.poly, f.poly) == 0) {
        int m = std::min(f.multiplicity, g.multiplicity);
        f.multiplicity -= m;
        g.multiplicity -= m;
      }
    }
  }
  std::erase_if(ad, [](const Factor& f) { return f.multiplicity == 0; });
  std::erase_if(bd, [](const Factor& f) { return f.multiplicity == 0; });
  std::vector<Factor> candidates = a.den;
  candidates.insert(candidates.end(), b.den.begin(), b.den.end());
  Poly num = detail::poly_mul(a.num, detail::expand_factors(bd));
  detail::absorb_denominator(num, ad, b.num, candidates);
  detail::cancel(num, ad);
  node_ = detail::make_node(std::move(num), std::move(ad));
  return *this;
}

bool operator==(const Expr& a, const Expr& b) {
  return a.node_ == b.node_ || detail::compare_node(*a.node_, *b.node_) == 0;
}

std::strong_ordering operator<=>(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  int c = detail::compare_node(*a.node_, *b.node_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

// Atom --------------------------------------------------------------------

namespace {

struct PayloadLess {
  bool operator()(const Atom::Payload* a, const Atom::Payload* b) const;
};

// Packs kind, then the atom's own fields, into 64 bits so that key order is
// atom order. Atoms that do not fit are compared field by field.
void assign_key(Atom::Payload& p) {
  constexpr unsigned kKindShift = 62;
  std::uint64_t kind = static_cast<std::uint64_t>(p.kind) << kKindShift;
  if (p.kind == Atom::Kind::Independent) {
    if (p.axis >= (std::uint64_t{1} << kKindShift)) return;
    p.key = kind | p.axis;
    p.keyed = true;
  } else if (p.kind == Atom::Kind::Jet) {
    // unknown: 10 bits, total order: 12 bits, then 8 bits per axis for at
    // most 5 axes, zero padded (a proper prefix sorts first either way).
    const MultiIndex& m = p.jet.order;
    if (p.jet.unknown >= 1024 || m.order() >= 4096 || m.dimension() > 5) return;
    std::uint64_t key = kind | (static_cast<std::uint64_t>(p.jet.unknown) << 52) |
                        (static_cast<std::uint64_t>(m.order()) << 40);
    for (std::size_t k = 0; k < m.dimension(); ++k) {
      if (m[k] > 255) return;
      key |= static_cast<std::uint64_t>(m[k]) << (32 - 8 * k);
    }
    p.key = key;
    p.keyed = true;
  }
}

}  // namespace

std::strong_ordering Atom::compare(const Payload& a, const Payload& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  switch (a.kind) {
    case Kind::Independent:
      return a.axis <=> b.axis;
    case Kind::Jet:
      return a.jet <=> b.jet;
    case Kind::Constant:
      return a.name <=> b.name;
    case Kind::Log:
      return a.argument <=> b.argument;
  }
  return std::strong_ordering::equal;
}

namespace {

bool PayloadLess::operator()(const Atom::Payload* a, const Atom::Payload* b) const {
  if (a->keyed && b->keyed && a->key != b->key) return a->key < b->key;
  return Atom::compare(*a, *b) < 0;
}

}  // namespace

Atom Atom::intern(Payload p) {
  // Payloads live for the whole program; the table is never destroyed so
  // atoms stay valid during static destruction.
  static auto* table = new std::set<const Payload*, PayloadLess>();
  static auto* mutex = new std::mutex();
  assign_key(p);
  std::lock_guard lock(*mutex);
  auto it = table->find(&p);
  if (it != table->end()) return Atom(*it);
  const Payload* stored = new Payload(std::move(p));
  table->insert(stored);
  return Atom(stored);
}

Atom::Atom() {
  static const Payload* const origin = independent(0).p_;
  p_ = origin;
}

Atom Atom::independent(std::size_t axis) {
  Payload p;
  p.kind = Kind::Independent;
  p.axis = axis;
  return intern(std::move(p));
}

Atom Atom::jet(JetVar v) {
  Payload p;
  p.kind = Kind::Jet;
  p.jet = std::move(v);
  return intern(std::move(p));
}

Atom Atom::constant(std::string name) {
  Payload p;
  p.kind = Kind::Constant;
  p.name = std::move(name);
  return intern(std::move(p));
}

Atom Atom::log(Expr argument) {
  Payload p;
  p.kind = Kind::Log;
  p.argument = std::move(argument);
  return intern(std::move(p));
}

// Kernels -----------------------------------------------------------------

Expr pow(const Expr& base, int exponent) {
  if (exponent == 0) return Expr(1);
  if (exponent < 0) return pow(Expr(1) / base, -exponent);
  const Node& n = base.node();
  if (n.num.empty()) return base;
  std::vector<Factor> den = n.den;
  for (auto& f : den) f.multiplicity *= exponent;
  return Expr(detail::make_node(detail::poly_pow(n.num, static_cast<unsigned>(exponent)), std::move(den)));
}

Expr exp(const Expr& argument) {
  const Node& n = argument.node();
  if (n.num.empty()) return Expr(1);
  detail::ExpArg arg;
  if (n.den.empty()) {
    for (const auto& t : n.num) {
      arg.parts.emplace_back(detail::from_poly(Poly{Term{t.mono, Rational(1)}}), t.coef);
    }
    std::sort(arg.parts.begin(), arg.parts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  } else {
    Rational c = n.num.front().coef;
    Expr basis(detail::make_node(detail::poly_scale(n.num, 1 / c, Monomial{}), n.den));
    arg.parts.emplace_back(std::move(basis), c);
  }
  return detail::from_poly(Poly{Term{Monomial{{}, std::move(arg)}, Rational(1)}});
}

Expr log(const Expr& argument) {
  const Node& n = argument.node();
  if (n.num.empty()) throw Error("log of zero");
  if (n.den.empty() && n.num.size() == 1) {
    const Term& t = n.num[0];
    if (t.mono.is_one() && t.coef == 1) return Expr();
    if (t.coef == 1 && t.mono.powers.empty()) return t.mono.exp.to_expr();
  }
  return Expr::atom(Atom::log(argument));
}

Expr sinh(const Expr& argument) {
  return (exp(argument) - exp(-argument)) / Expr(2);
}

Expr cosh(const Expr& argument) {
  return (exp(argument) + exp(-argument)) / Expr(2);
}

Expr tanh(const Expr& argument) {
  Expr e2 = exp(Expr(2) * argument);
  return (e2 - Expr(1)) / (e2 + Expr(1));
}

Expr simplify(const Expr& e) { return e; }

// Atom sets ---------------------------------------------------------------

namespace {

void collect_atoms(const Expr& e, AtomSet& out);

void collect_atoms(const Poly& p, AtomSet& out) {
  for (const auto& t : p) {
    for (const auto& [a, k] : t.mono.powers) {
      if (a.is_base()) {
        out.insert(a);
      } else {
        collect_atoms(a.log_argument(), out);
      }
    }
    for (const auto& [basis, c] : t.mono.exp.parts) collect_atoms(basis, out);
  }
}

void collect_atoms(const Expr& e, AtomSet& out) {
  collect_atoms(e.node().num, out);
  for (const auto& f : e.node().den) collect_atoms(f.poly, out);
}

}  // namespace

AtomSet depends_on(const Expr& e) {
  AtomSet out;
  collect_atoms(e, out);
  return out;
}

bool depends_on(const Expr& e, const Atom& a) { return depends_on(e).contains(a); }

std::set<JetVar> jet_atoms(const Expr& e) {
  std::set<JetVar> out;
  for (const auto& a : depends_on(e)) {
    if (a.kind() == Atom::Kind::Jet) out.insert(a.jet_var());
  }
  return out;
}

// Substitution ------------------------------------------------------------

namespace {

class Substituter {
 public:
  explicit Substituter(const AtomMap& map) : map_(map) {}

  Expr apply(const Expr& e) {
    AtomSet atoms = depends_on(e);
    bool touched = false;
    for (const auto& a : atoms) {
      if (lookup(a)) {
        touched = true;
        break;
      }
    }
    if (!touched) return e;
    Expr result = apply(e.node().num);
    for (const auto& f : e.node().den) result /= pow(apply(f.poly), f.multiplicity);
    return result;
  }

 private:
  const std::optional<Expr>& lookup(const Atom& a) {
    auto it = cache_.find(a);
    if (it == cache_.end()) it = cache_.emplace(a, map_(a)).first;
    return it->second;
  }

  Expr power(const Atom& a, const Expr& value, int k) {
    auto key = std::pair{a, k};
    auto it = powers_.find(key);
    if (it == powers_.end()) it = powers_.emplace(key, pow(value, k)).first;
    return it->second;
  }

  Expr apply(const Poly& p) {
    Poly untouched;
    // Terms grouped by the replaced part of their monomial.
    std::map<Monomial, Poly, detail::MonoDescending> groups;
    for (const auto& t : p) {
      Monomial kept;
      Monomial replaced;
      for (const auto& [a, k] : t.mono.powers) {
        bool hit = false;
        if (a.is_base()) {
          hit = lookup(a).has_value();
        } else {
          hit = apply(a.log_argument()) != a.log_argument();
        }
        (hit ? replaced : kept).powers.emplace_back(a, k);
      }
      if (!t.mono.exp.empty()) {
        bool hit = false;
        for (const auto& [basis, c] : t.mono.exp.parts) {
          if (apply(basis) != basis) {
            hit = true;
            break;
          }
        }
        (hit ? replaced : kept).exp = t.mono.exp;
      }
      if (replaced.is_one()) {
        untouched.push_back(t);
        continue;
      }
      groups[replaced].push_back(Term{std::move(kept), t.coef});
    }
    std::vector<Expr> parts;
    parts.reserve(groups.size() + 1);
    parts.push_back(detail::from_poly(std::move(untouched)));
    for (auto& [replaced, kept] : groups) {
      Expr factor(1);
      for (const auto& [a, k] : replaced.powers) {
        if (a.is_base()) {
          factor *= power(a, *lookup(a), k);
        } else {
          factor *= pow(log(apply(a.log_argument())), k);
        }
      }
      if (!replaced.exp.empty()) factor *= exp(apply(replaced.exp.to_expr()));
      parts.push_back(detail::from_poly(std::move(kept)) * factor);
    }
    return detail::sum(parts);
  }

  const AtomMap& map_;
  std::map<Atom, std::optional<Expr>> cache_;
  std::map<std::pair<Atom, int>, Expr> powers_;
};

}  // namespace

Expr substitute(const Expr& e, const AtomMap& replacement) {
  Substituter s(replacement);
  return s.apply(e);
}

Expr substitute(const Expr& e, const Atom& target, const Expr& replacement) {
  return substitute(e, [&](const Atom& a) -> std::optional<Expr> {
    if (a == target) return replacement;
    return std::nullopt;
  });
}

Expr substitute(const Expr& e, const std::map<Atom, Expr>& replacements) {
  return substitute(e, [&](const Atom& a) -> std::optional<Expr> {
    auto it = replacements.find(a);
    if (it == replacements.end()) return std::nullopt;
    return it->second;
  });
}

// Derivations -------------------------------------------------------------

namespace {

class Deriver {
 public:
  explicit Deriver(const AtomDerivative& d) : d_(d) {}

  Expr apply(const Expr& e) {
    const Node& n = e.node();
    if (n.num.empty()) return Expr();
    Expr result = apply(n.num);
    if (n.den.empty()) return result;
    Expr num = detail::from_poly(n.num);
    for (const auto& f : n.den) {
      Expr df = apply(f.poly);
      if (df.is_zero_literal()) continue;
      result -= Expr(static_cast<long>(f.multiplicity)) * num * df *
                detail::reciprocal_of_factor(f.poly, 1);
    }
    return result * Expr(detail::make_node(detail::poly_constant(1), n.den));
  }

 private:
  const Expr& atom_derivative(const Atom& a) {
    auto it = atoms_.find(a);
    if (it != atoms_.end()) return it->second;
    Expr value;
    if (a.is_base()) {
      value = d_(a);
    } else {
      Expr inner = apply(a.log_argument());
      if (!inner.is_zero_literal()) value = inner / a.log_argument();
    }
    return atoms_.emplace(a, std::move(value)).first->second;
  }

  Expr apply(const Poly& p) {
    std::map<Atom, Poly> by_atom;
    std::vector<std::pair<detail::ExpArg, Poly>> by_exp;
    for (const auto& t : p) {
      for (const auto& [a, k] : t.mono.powers) {
        if (atom_derivative(a).is_zero_literal()) continue;
        Monomial m = t.mono;
        for (auto& [b, e] : m.powers) {
          if (b == a) e -= 1;
        }
        auto zero = [](const auto& pe) { return pe.second == 0; };
        m.powers.erase(std::remove_if(m.powers.begin(), m.powers.end(), zero), m.powers.end());
        by_atom[a] = detail::poly_add(by_atom[a], Poly{Term{std::move(m), t.coef * k}});
      }
      if (!t.mono.exp.empty()) {
        auto it = std::find_if(by_exp.begin(), by_exp.end(),
                               [&](const auto& g) { return g.first == t.mono.exp; });
        if (it == by_exp.end()) {
          by_exp.emplace_back(t.mono.exp, Poly{});
          it = std::prev(by_exp.end());
        }
        it->second = detail::poly_add(it->second, Poly{t});
      }
    }
    Expr result;
    for (auto& [a, coef] : by_atom) result += detail::from_poly(std::move(coef)) * atom_derivative(a);
    for (auto& [arg, coef] : by_exp) {
      Expr darg = apply(arg.to_expr());
      if (!darg.is_zero_literal()) result += detail::from_poly(std::move(coef)) * darg;
    }
    return result;
  }

  const AtomDerivative& d_;
  std::map<Atom, Expr> atoms_;
};

}  // namespace

Expr derive(const Expr& e, const AtomDerivative& derivative) {
  Deriver d(derivative);
  return d.apply(e);
}

Expr partial(const Expr& e, const Atom& v) {
  return derive(e, [&](const Atom& a) { return a == v ? Expr(1) : Expr(); });
}

// Evaluation --------------------------------------------------------------

namespace {

class Evaluator {
 public:
  Evaluator(const Assignment& values, const EvalOptions& options) : values_(values), options_(options) {}

  double apply(const Expr& e) {
    const Node& n = e.node();
    double num = apply(n.num);
    double den = 1;
    for (const auto& f : n.den) {
      double v = apply(f.poly);
      if (std::abs(v) < options_.pole_epsilon) throw PoleError("denominator vanishes at sample point");
      den *= std::pow(v, f.multiplicity);
    }
    return num / den;
  }

 private:
  double atom_value(const Atom& a) {
    auto it = atoms_.find(a);
    if (it != atoms_.end()) return it->second;
    double v = 0;
    if (a.is_base()) {
      auto found = values_.find(a);
      if (found == values_.end()) throw MissingAtomError("no value for atom in assignment");
      v = found->second;
    } else {
      double x = apply(a.log_argument());
      if (!(x > options_.pole_epsilon)) throw PoleError("log of non-positive value");
      v = std::log(x);
    }
    atoms_.emplace(a, v);
    return v;
  }

  double apply(const Poly& p) {
    double sum = 0;
    for (const auto& t : p) {
      double term = t.coef.get_d();
      for (const auto& [a, k] : t.mono.powers) {
        double v = atom_value(a);
        if (k < 0 && std::abs(v) < options_.pole_epsilon) throw PoleError("negative power of vanishing atom");
        term *= std::pow(v, k);
      }
      if (!t.mono.exp.empty()) {
        double arg = 0;
        for (const auto& [basis, c] : t.mono.exp.parts) arg += c.get_d() * apply(basis);
        term *= std::exp(arg);
      }
      sum += term;
    }
    return sum;
  }

  const Assignment& values_;
  const EvalOptions& options_;
  std::map<Atom, double> atoms_;
};

}  // namespace

double eval(const Expr& e, const Assignment& values, const EvalOptions& options) {
  Evaluator ev(values, options);
  return ev.apply(e);
}

}  // namespace dpass
