#include <gtest/gtest.h>

#include "dpass/format.hpp"
#include "dpass/jet.hpp"
#include "dpass/passivity.hpp"
#include "dpass/syzygy.hpp"
#include "fixtures.hpp"

using namespace dpass;
using namespace dpass::testing;

namespace {

JetVar J(unsigned a, unsigned b) { return JetVar{0, MultiIndex{a, b}}; }

const Equation* with_lead(const DiffSystem& s, const JetVar& lead) {
  for (const auto& e : s.equations()) {
    if (e.lead == lead) return &e;
  }
  return nullptr;
}

// Tail of the equation obtained by solving text for its leading coordinate.
Expr tail_of(const char* text) { return leading_term(P(text), Ranking::default_for(2))->tail; }

DiffSystem s1() { return system_of({{"f", kF}, {"h1", kH1}}); }
DiffSystem s2() { return system_of({{"f", kF}, {"h2", kH2}}); }
DiffSystem s5() { return system_of({{"f5", kF5}, {"f6", kF6}}); }
DiffSystem s12() { return system_of({{"f1", kF1}, {"f2", kF2}}); }

}  // namespace

TEST(IsPassive, Examples) {
  EXPECT_TRUE(is_passive(s12()));
  EXPECT_FALSE(is_passive(s1()));
  EXPECT_FALSE(is_passive(s2()));
  EXPECT_TRUE(is_passive(system_of({{"f", kF}})));
  // A non-normalized system is not passive even when its pairs reduce.
  EXPECT_FALSE(is_passive(system_of({{"f1", kF1}, {"g", "u[1,0] - u[0,3]"}})));
}

TEST(CheckReducibility, ReportsEveryPair) {
  auto reports = check_reducibility(s12());
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].first, "f1");
  EXPECT_EQ(reports[0].second, "f2");
  EXPECT_TRUE(reports[0].zero);
  // An exact literal zero is not a probabilistic verdict.
  EXPECT_EQ(reports[0].probabilistic, !reports[0].normal_form.remainder.is_zero_literal());

  auto s1r = check_reducibility(s1());
  ASSERT_EQ(s1r.size(), 1u);
  EXPECT_FALSE(s1r[0].zero);
  EXPECT_FALSE(s1r[0].probabilistic);
  EXPECT_EQ(s1r[0].tau, tau(P(kF), P(kH1), Ranking::default_for(2)));
}

TEST(CheckReducibility, PublishedSystemS5IsNotPassive) {
  // The printed f5, f6 leave a nonzero remainder; an independent computer
  // algebra check gives the same polynomial.
  auto reports = check_reducibility(s5());
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_FALSE(reports[0].zero);
  Expr expected = P(
      "4*exp(-2*u)*(r*(2*u[0,1]^2 - 3*u[0,2])*exp(4*u) + s*(4*u[0,1]^2 - 3*u[0,2])"
      " + 2*u[0,1]*(-u[0,1]^4 + 4*u[0,1]^2*u[0,2] - 4*u[0,2]^2)*exp(u))");
  EXPECT_TRUE(same(reports[0].normal_form.remainder, expected)) << format(reports[0].normal_form.remainder);
}

TEST(Complete, S1YieldsF1AndF2) {
  PassivityReport report = complete(s1());
  ASSERT_EQ(report.status, CompletionStatus::Passive) << report.reason;
  EXPECT_TRUE(is_passive(report.system));
  ASSERT_EQ(report.system.size(), 2u);
  const Equation* a = with_lead(report.system, J(0, 2));
  const Equation* b = with_lead(report.system, J(1, 0));
  ASSERT_NE(a, nullptr);
  ASSERT_NE(b, nullptr);
  EXPECT_TRUE(same(a->tail, tail_of(kF1)));
  EXPECT_TRUE(same(b->tail, tail_of(kF2)));
  EXPECT_EQ(a->name, "c1");
  EXPECT_EQ(b->name, "c2");
  EXPECT_EQ(report.trace.generations, 3u);
}

TEST(Complete, S2YieldsF3AndF4) {
  PassivityReport report = complete(s2());
  ASSERT_EQ(report.status, CompletionStatus::Passive) << report.reason;
  const Equation* a = with_lead(report.system, J(0, 4));
  const Equation* b = with_lead(report.system, J(1, 0));
  ASSERT_NE(a, nullptr);
  ASSERT_NE(b, nullptr);
  EXPECT_TRUE(same(a->tail, tail_of(kF3)));
  EXPECT_TRUE(same(b->tail, tail_of(kF4)));
  EXPECT_EQ(replay(s2(), report.trace), report.system);
}

TEST(Complete, PassiveInputIsUnchanged) {
  PassivityReport report = complete(s12());
  EXPECT_EQ(report.status, CompletionStatus::Passive);
  EXPECT_EQ(report.system, s12());
  EXPECT_EQ(report.trace.generations, 1u);
  // Idempotence: completing a completed system does nothing.
  PassivityReport again = complete(complete(s1()).system);
  EXPECT_EQ(again.system, complete(s1()).system);
}

TEST(Complete, LimitsGiveIncomplete) {
  CompletionLimits none;
  none.max_new_equations = 0;
  PassivityReport report = complete(s1(), none);
  EXPECT_EQ(report.status, CompletionStatus::Incomplete);
  EXPECT_FALSE(report.reason.empty());

  CompletionLimits few_steps;
  few_steps.max_steps = 3;
  EXPECT_EQ(complete(s2(), few_steps).status, CompletionStatus::Incomplete);
}

TEST(Complete, S5Fails) {
  ParseContext ctx;
  ctx.definitions = {{"r", Expr(Rational(-1, 2))}, {"s", Expr(Rational(1, 2))}};
  DiffSystem bound =
      DiffSystem::from_expressions({{"f5", parse(kF5, ctx)}, {"f6", P(kF6)}}, Ranking::default_for(2), 1);
  PassivityReport report = complete(bound);
  EXPECT_EQ(report.status, CompletionStatus::Failed);
  ASSERT_FALSE(report.trace.events.empty());
  EXPECT_EQ(report.trace.events.back().verdict, Verdict::Failure);
}

TEST(Replay, ReproducesCompletion) {
  PassivityReport report = complete(s1());
  EXPECT_EQ(replay(s1(), report.trace), report.system);
  // Replaying an empty trace only autoreduces.
  EXPECT_EQ(replay(s12(), CompletionTrace{}), s12());
}

TEST(IdealMembership, Examples) {
  DiffSystem s = s12();
  EXPECT_TRUE(ideal_membership(apply_power(P(kF1), MultiIndex{2, 1}), s));
  EXPECT_TRUE(ideal_membership(P(kF) * P("cosh(u)") + apply_power(P(kF2), MultiIndex{0, 1}), s));
  EXPECT_FALSE(ideal_membership(P("u"), s));
  EXPECT_FALSE(ideal_membership(P("u[0,1]"), s));
  EXPECT_THROW(ideal_membership(P("u"), s1()), NotPassiveError);
}

TEST(PrincipalCones, Examples) {
  auto cones = principal_cones(s12());
  ASSERT_EQ(cones.size(), 2u);
  EXPECT_EQ(cones[0].apex, (MultiIndex{0, 2}));
  EXPECT_EQ(cones[1].apex, (MultiIndex{1, 0}));
  // Redundant generators are dropped.
  auto nested = principal_cones(system_of({{"f1", kF1}, {"g", "u[1,2] - u"}}));
  ASSERT_EQ(nested.size(), 1u);
  EXPECT_EQ(nested[0].apex, (MultiIndex{0, 2}));
}

// Randomized properties --------------------------------------------------------

TEST(PassivityProperties, DerivativesOfCompletedSystemAreMembers) {
  // Every combination sum c_k D^mu_k g_k of the completed equations reduces
  // to zero modulo the completed system.
  ExprGen gen(601);
  DiffSystem s = complete(s1()).system;
  for (int i = 0; i < 200; ++i) {
    Expr f;
    for (int k = gen.uniform(1, 3); k > 0; --k) {
      const Equation& e = s[static_cast<std::size_t>(gen.uniform(0, 1))];
      Expr coef = gen.uniform(0, 1) ? Expr(gen.coefficient()) : gen.factor();
      f += coef * apply_power(e.expr(), gen.index(2));
    }
    ASSERT_TRUE(ideal_membership(f, s)) << format(f);
  }
}

TEST(PassivityProperties, TauNormalFormsVanishOnCompletedSystem) {
  ExprGen gen(602);
  DiffSystem s = complete(s1()).system;
  Ranking r = s.ranking();
  for (int i = 0; i < 200; ++i) {
    MultiIndex mu = gen.index(2);
    Expr a = apply_power(s[0].expr(), mu);
    Expr b = apply_power(s[1].expr(), gen.index(2));
    auto la = leading_term(a, r);
    auto lb = leading_term(b, r);
    ASSERT_TRUE(la && lb);
    if (la->lead == lb->lead) continue;
    ASSERT_TRUE(is_zero(normal_form(tau(a, b, r), s).remainder));
  }
}
