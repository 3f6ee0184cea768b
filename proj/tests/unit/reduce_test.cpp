#include <gtest/gtest.h>

#include "dpass/format.hpp"
#include "dpass/jet.hpp"
#include "dpass/reduce.hpp"
#include "fixtures.hpp"

using namespace dpass;
using namespace dpass::testing;

namespace {

JetVar J(unsigned a, unsigned b) { return JetVar{0, MultiIndex{a, b}}; }

Equation eq(const std::string& name, const char* text) {
  auto lt = leading_term(P(text), Ranking::default_for(2));
  if (!lt) throw std::logic_error(text);
  return Equation{name, lt->lead, lt->tail};
}

DiffSystem s1() { return system_of({{"f", kF}, {"h1", kH1}}); }
DiffSystem s12() { return system_of({{"f1", kF1}, {"f2", kF2}}); }

// Random expression in jets up to the given order, with smooth factors only.
Expr random_jet_expr(ExprGen& gen, unsigned order) {
  Expr e;
  for (int t = gen.uniform(1, 3); t > 0; --t) {
    Expr m = gen.coefficient();
    for (int k = gen.uniform(1, 3); k > 0; --k) {
      switch (gen.uniform(0, 4)) {
        case 0:
          m *= cosh(Expr::jet(0, MultiIndex{0, 0}));
          break;
        case 1:
          m *= Expr::independent(static_cast<std::size_t>(gen.uniform(0, 1)));
          break;
        default:
          m *= Expr::jet(JetVar{0, gen.index(order)});
      }
    }
    e += m;
  }
  return e;
}

}  // namespace

TEST(DiffSystemInvariants, RejectsBadInput) {
  Ranking r = Ranking::default_for(2);
  EXPECT_THROW(DiffSystem({Equation{"a", J(0, 1), Expr::jet(J(0, 2))}}, r, 1), InvalidSystemError);
  EXPECT_THROW(DiffSystem({eq("a", kF), eq("b", "u[1,1] - u")}, r, 1), InvalidSystemError);
  EXPECT_THROW(DiffSystem({eq("a", kF), eq("a", kH1)}, r, 1), InvalidSystemError);
  EXPECT_THROW(system_of({{"z", "u[1,1]*u - 1"}}), InvalidSystemError);
  EXPECT_NO_THROW(s1());
}

TEST(ReduceOnce, Examples) {
  Ranking r = Ranking::default_for(2);
  auto step = reduce_once(P("u[1,2]"), eq("f", kF), r);
  ASSERT_TRUE(step);
  EXPECT_EQ(step->first, P("cosh(u)*u[0,1]"));
  EXPECT_EQ(step->second.target, J(1, 2));
  EXPECT_EQ(step->second.delta, (MultiIndex{0, 1}));
  EXPECT_EQ(step->second.equation, "f");

  // Highest reducible coordinate goes first.
  auto two = reduce_once(P("u[1,1] + u[2,1]"), eq("f", kF), r);
  ASSERT_TRUE(two);
  EXPECT_EQ(two->second.target, J(2, 1));
  EXPECT_EQ(two->first, P("u[1,1] + cosh(u)*u[1,0]"));

  EXPECT_FALSE(reduce_once(P("u[0,5] + u[1,0]"), eq("f", kF), r));
}

TEST(NormalForm, Examples) {
  DiffSystem s = s1();
  EXPECT_EQ(normal_form(P("u[1,1]"), s).remainder, P("sinh(u)"));
  EXPECT_EQ(normal_form(P("u[0,4]"), s).remainder, P("3/2*u[0,1]^2*u[0,2]"));
  EXPECT_EQ(normal_form(P("u[1,3]"), s).remainder, P("cosh(u)*u[0,2] + sinh(u)*u[0,1]^2"));
  EXPECT_TRUE(normal_form(Expr(0), s).trace.empty());

  NormalForm nf = normal_form(P("u[1,3]"), s);
  ASSERT_EQ(nf.trace.size(), 1u);
  EXPECT_EQ(nf.trace[0].equation, "f");
}

TEST(NormalForm, TraceNamesEquationsByTieBreak) {
  // u[1,3] is a derivative of both u[1,1] (f) and u[0,3] (h1); f is listed first.
  DiffSystem s = s1();
  EXPECT_EQ(normal_form(P("u[1,3]"), s).trace.front().equation, "f");
  DiffSystem swapped = system_of({{"h1", kH1}, {"f", kF}});
  EXPECT_EQ(normal_form(P("u[1,3]"), swapped).trace.front().equation, "h1");
}

TEST(NormalForm, BudgetExceeded) {
  ReduceOptions tight;
  tight.max_steps = 1;
  try {
    normal_form(P("u[1,3] + u[2,2]"), s1(), tight);
    FAIL() << "expected StepBudgetExceeded";
  } catch (const StepBudgetExceeded& e) {
    EXPECT_EQ(e.partial_trace().size(), 1u);
  }
}

TEST(PrincipalAtoms, AscendingAndGenerating) {
  DiffSystem s = s1();
  auto atoms = principal_atoms(P("u[0,4] + u[1,1] + u[0,2] + u[2,1]"), s);
  ASSERT_EQ(atoms.size(), 3u);
  EXPECT_EQ(atoms[0], J(0, 4));
  EXPECT_EQ(atoms[1], J(1, 1));
  EXPECT_EQ(atoms[2], J(2, 1));
  EXPECT_EQ(generating_equation(J(1, 3), s), 0u);
  EXPECT_EQ(generating_equation(J(0, 5), s), 1u);
  EXPECT_FALSE(generating_equation(J(5, 0), s));
}

TEST(Monicize, Examples) {
  Ranking r = Ranking::default_for(2);
  auto a = monicize(P("2*u[1,1] - 1"), r);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->lead, J(1, 1));
  EXPECT_EQ(a->tail, Expr(Rational(-1, 2)));

  auto b = monicize(P("u[1,1]*u - 1"), r);
  ASSERT_TRUE(b);
  EXPECT_TRUE(same(b->tail, P("-1/u")));

  auto c = monicize(P("(u[0,1]^2 + 1)*u[0,2] - x1*u[0,1]"), r);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->lead, J(0, 2));
  EXPECT_TRUE(same(c->tail, P("-x1*u[0,1]/(u[0,1]^2 + 1)")));

  EXPECT_FALSE(monicize(P("u[0,2]^2 - 1"), r));
  EXPECT_FALSE(monicize(P("exp(u[0,2]) - 1"), r));
  EXPECT_FALSE(monicize(P("x1 - 1"), r));
  EXPECT_FALSE(monicize(Expr(0), r));
}

TEST(IsNormalized, Examples) {
  EXPECT_TRUE(is_normalized(s1()).normalized);
  EXPECT_TRUE(is_normalized(s12()).normalized);

  NormalizationReport lead = is_normalized(system_of({{"f", kF}, {"g", "u[1,2] - u"}}));
  EXPECT_FALSE(lead.normalized);
  EXPECT_FALSE(lead.witness.empty());

  NormalizationReport tail = is_normalized(system_of({{"f1", kF1}, {"g", "u[1,0] - u[0,3]"}}));
  EXPECT_FALSE(tail.normalized);
}

TEST(Autoreduce, DropsRedundantEquations) {
  Ranking r = Ranking::default_for(2);
  Expr d = apply_power(P(kF1), MultiIndex{0, 1});
  DiffSystem s = DiffSystem::from_expressions({{"f1", P(kF1)}, {"g", d}}, r, 1);
  DiffSystem a = autoreduce(s);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].name, "f1");
}

TEST(Autoreduce, ReplacesDivisibleLeadByRemainder) {
  // g has lead u[1,2] = D2 u[1,1]; its remainder modulo f is
  // u[0,1]*(cosh u - u[0,2]), which is solved for u[0,2] and keeps the name g.
  DiffSystem s = system_of({{"f", kF}, {"g", "u[1,2] - u[0,1]*u[0,2]"}});
  DiffSystem a = autoreduce(s);
  ASSERT_EQ(a.size(), 2u);
  const Equation* g = a.find("g");
  ASSERT_NE(g, nullptr);
  EXPECT_EQ(g->lead, J(0, 2));
  EXPECT_TRUE(same(g->tail, P("-cosh(u)")));
  EXPECT_TRUE(is_normalized(a).normalized);
}

TEST(Autoreduce, ReducesTails) {
  DiffSystem s = system_of({{"f1", kF1}, {"g", "u[1,0] - u[0,3]"}});
  DiffSystem a = autoreduce(s);
  EXPECT_TRUE(is_normalized(a).normalized);
  EXPECT_TRUE(same(a.find("g")->tail, -normal_form(P("u[0,3]"), s.subset({"f1"})).remainder));
}

// Randomized properties --------------------------------------------------------

TEST(ReduceProperties, RemainderHasNoPrincipalCoordinate) {
  ExprGen gen(401);
  for (const DiffSystem& s : {s1(), s12()}) {
    for (int i = 0; i < 150; ++i) {
      Expr f = random_jet_expr(gen, 4);
      NormalForm nf = normal_form(f, s);
      ASSERT_TRUE(principal_atoms(nf.remainder, s).empty()) << format(f);
    }
  }
}

TEST(ReduceProperties, NormalFormIsIdempotent) {
  ExprGen gen(402);
  DiffSystem s = s12();
  for (int i = 0; i < 200; ++i) {
    Expr f = random_jet_expr(gen, 4);
    NormalForm once = normal_form(f, s);
    NormalForm twice = normal_form(once.remainder, s);
    ASSERT_EQ(twice.remainder, once.remainder);
    ASSERT_TRUE(twice.trace.empty());
  }
}

TEST(ReduceProperties, OrderIndependenceOnPassiveSystem) {
  // Modulo a passive system the normal form does not depend on which
  // principal coordinate is eliminated first.
  ExprGen gen(403);
  DiffSystem s = s12();
  for (int i = 0; i < 200; ++i) {
    Expr f = random_jet_expr(gen, 3);
    Expr reference = normal_form(f, s).remainder;
    ReduceOptions random;
    random.random_choice_seed = static_cast<std::uint64_t>(i) + 1;
    Expr shuffled = normal_form(f, s, random).remainder;
    ASSERT_TRUE(same(reference, shuffled)) << format(f);
  }
}

TEST(ReduceProperties, EveryStepIsASubstitution) {
  ExprGen gen(404);
  DiffSystem s = s1();
  for (int i = 0; i < 200; ++i) {
    Expr f = random_jet_expr(gen, 4);
    NormalForm nf = normal_form(f, s);
    Expr current = f;
    for (const ReductionStep& step : nf.trace) {
      const Equation* e = s.find(step.equation);
      ASSERT_NE(e, nullptr);
      ASSERT_EQ(e->lead.order + step.delta, step.target.order);
      Expr expected = substitute(current, Atom::jet(step.target), -apply_power(e->tail, step.delta));
      ASSERT_EQ(step.remainder, expected);
      current = step.remainder;
    }
    ASSERT_EQ(current, nf.remainder);
  }
}

TEST(ReduceProperties, AutoreduceIsIdempotent) {
  ExprGen gen(405);
  Ranking r = Ranking::default_for(2);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    std::vector<std::pair<std::string, Expr>> exprs;
    std::set<JetVar> leads;
    for (int k = gen.uniform(2, 3); k > 0; --k) {
      JetVar lead{0, gen.index(3)};
      if (!leads.insert(lead).second) continue;
      Expr tail;
      for (int t = gen.uniform(0, 2); t > 0; --t) {
        JetVar v{0, gen.index(3)};
        if (r.less(v, lead)) tail += Expr(gen.coefficient()) * Expr::jet(v);
      }
      if (lead.order.order() > 0 && gen.uniform(0, 2) == 0) tail += sinh(Expr::jet(0, MultiIndex{0, 0}));
      exprs.emplace_back("e" + std::to_string(exprs.size()), Expr::jet(lead) + tail);
    }
    DiffSystem s = DiffSystem::from_expressions(exprs, r, 1);
    DiffSystem once(s);
    try {
      once = autoreduce(s);
    } catch (const AutoreduceError&) {
      continue;
    }
    ASSERT_TRUE(is_normalized(once).normalized);
    ASSERT_EQ(autoreduce(once), once);
    ++checked;
  }
  EXPECT_GE(checked, 200);
}
