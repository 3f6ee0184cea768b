#include <gtest/gtest.h>

#include <cmath>

#include "dpass/passivity.hpp"
#include "dpass/series.hpp"
#include "fixtures.hpp"

using namespace dpass;
using namespace dpass::testing;

namespace {

JetVar J(unsigned a, unsigned b) { return JetVar{0, MultiIndex{a, b}}; }

DiffSystem s12() { return system_of({{"f1", kF1}, {"f2", kF2}}); }

// Principal iff some lead divides the coordinate; checked directly.
std::vector<JetVar> brute_force_principal(const DiffSystem& s, unsigned horizon) {
  std::vector<JetVar> out;
  for (const auto& alpha : multi_indices_up_to(s.dimension(), horizon)) {
    for (const auto& e : s.equations()) {
      if (e.lead.order.divides(alpha)) {
        out.push_back(JetVar{0, alpha});
        break;
      }
    }
  }
  return out;
}

std::vector<JetVar> sorted(std::vector<JetVar> v) {
  std::sort(v.begin(), v.end());
  return v;
}

const std::vector<std::pair<double, double>> kImplicitPoints = {
    {-0.2, -0.2}, {-0.2, 0.1}, {-0.2, 0.3}, {0, -0.2}, {0, 0.1}, {0, 0.3}, {0.2, -0.2}, {0.2, 0.1}, {0.2, 0.3}};

}  // namespace

TEST(Classify, PassivePairAtHorizonThree) {
  JetClassification c = classify(s12(), 3);
  EXPECT_EQ(sorted(c.principal),
            sorted({J(0, 2), J(0, 3), J(1, 0), J(1, 1), J(1, 2), J(2, 0), J(2, 1), J(3, 0)}));
  EXPECT_EQ(sorted(c.parametric), sorted({J(0, 0), J(0, 1)}));
  EXPECT_EQ(c.generators.at(J(1, 2)), (std::pair<std::size_t, MultiIndex>{0, MultiIndex{1, 0}}));
  EXPECT_EQ(c.generators.at(J(2, 1)), (std::pair<std::size_t, MultiIndex>{1, MultiIndex{1, 1}}));
}

TEST(Classify, UncompletedSystem) {
  JetClassification c = classify(system_of({{"f", kF}, {"h1", kH1}}), 3);
  EXPECT_EQ(sorted(c.principal), sorted({J(1, 1), J(1, 2), J(2, 1), J(0, 3)}));
  EXPECT_EQ(sorted(c.parametric), sorted({J(0, 0), J(0, 1), J(0, 2), J(1, 0), J(2, 0), J(3, 0)}));
}

TEST(EvaluatePoint, SpotValues) {
  SeriesSolution sol = evaluate_point(s12(), {0, 0}, {{J(0, 0), 1.0}, {J(0, 1), 1.0}}, 4);
  EXPECT_NEAR(sol.values.at(J(0, 2)), std::tanh(1.0) / 2, 1e-15);
  EXPECT_NEAR(sol.values.at(J(0, 2)), 0.3807970779778824, 1e-15);
  EXPECT_NEAR(sol.values.at(J(1, 0)), 2 * std::cosh(1.0), 1e-14);
  EXPECT_NEAR(sol.values.at(J(0, 3)), 0.5, 1e-14);
  // f is a consequence, so u[1,1] = sinh u.
  EXPECT_NEAR(sol.values.at(J(1, 1)), std::sinh(1.0), 1e-13);
  EXPECT_NEAR(sol.coefficients.at(J(0, 2)), sol.values.at(J(0, 2)) / 2, 1e-16);
  EXPECT_NEAR(sol.derivative(J(0, 2), {0, 0}), sol.values.at(J(0, 2)), 1e-15);
  EXPECT_EQ(sol.values.size(), 15u);
}

TEST(EvaluatePoint, MissingParametricValuesAreZero) {
  SeriesSolution sol = evaluate_point(system_of({{"f", kF}}), {0, 0}, {}, 3);
  EXPECT_EQ(sol.values.at(J(1, 1)), 0.0);
  EXPECT_EQ(sol.values.at(J(2, 1)), 0.0);
}

TEST(EvaluatePoint, PoleRaisesSingularDataError) {
  try {
    evaluate_point(s12(), {0, 0}, {{J(0, 0), 1.0}, {J(0, 1), 0.0}}, 3);
    FAIL() << "expected SingularDataError";
  } catch (const SingularDataError& e) {
    EXPECT_EQ(e.equation(), "f2");
  }
}

TEST(EvaluatePoint, DependsOnThePoint) {
  DiffSystem s = system_of({{"g", "u[1,0] - x1*x2"}});
  SeriesSolution sol = evaluate_point(s, {2, 3}, {}, 2);
  EXPECT_DOUBLE_EQ(sol.values.at(J(1, 0)), 6.0);
  EXPECT_DOUBLE_EQ(sol.values.at(J(1, 1)), 2.0);
  EXPECT_DOUBLE_EQ(sol.values.at(J(2, 0)), 3.0);
}

TEST(Residual, SmallForTheSolutionLargeForAWrongEquation) {
  SeriesSolution sol = evaluate_point(s12(), {0, 0}, {{J(0, 0), 1.0}, {J(0, 1), 1.0}}, 8);
  auto offsets = sample_offsets(2, 0.05);
  ASSERT_EQ(offsets.size(), 8u);
  EXPECT_LT(residual(s12(), sol, offsets), 1e-6);
  EXPECT_GT(residual({P("u[1,0] - 1")}, sol, offsets), 1.0);
}

TEST(Residual, TruncationScaling) {
  // Halving the radius divides the truncation error by roughly 2^(N - k + 1)
  // for an equation of order k; require at least 2^(N - k - 1).
  DiffSystem s = complete(system_of({{"f", kF}, {"h1", kH1}})).system;
  SeriesSolution sol = evaluate_point(s, {0, 0}, {{J(0, 0), 1.0}, {J(0, 1), 1.0}}, 8);
  std::vector<Expr> original = {P(kF), P(kH1)};
  double big = residual(original, sol, sample_offsets(2, 0.05));
  double small = residual(original, sol, sample_offsets(2, 0.025));
  EXPECT_GT(big / small, std::pow(2.0, 8 - 3 - 1));
}

TEST(ConsistencyDefect, PassiveVersusNot) {
  SeriesSolution good = evaluate_point(s12(), {0, 0}, {{J(0, 0), 1.0}, {J(0, 1), 1.0}}, 6);
  EXPECT_LT(consistency_defect(s12(), good), 1e-9);

  DiffSystem s1 = system_of({{"f", kF}, {"h1", kH1}});
  SeriesSolution bad = evaluate_point(s1, {0, 0}, {{J(0, 0), 1.0}, {J(0, 1), 1.0}, {J(0, 2), 0.2}}, 6);
  EXPECT_GT(consistency_defect(s1, bad), 1e-3);
}

TEST(SampleOffsets, Shape) {
  auto o = sample_offsets(3, 0.5);
  EXPECT_EQ(o.size(), 6u + 8u);
  for (const auto& v : o) {
    double n = 0;
    for (double c : v) n += c * c;
    EXPECT_NEAR(std::sqrt(n), 0.5, 1e-15);
  }
}

TEST(Implicit, IntegralBasics) {
  EXPECT_EQ(sech_root_integral(0), 0.0);
  EXPECT_NEAR(sech_root_integral(-0.7), -sech_root_integral(0.7), 1e-14);
  double h = 1e-5;
  EXPECT_NEAR((sech_root_integral(0.4 + h) - sech_root_integral(0.4 - h)) / (2 * h), 1 / std::sqrt(std::cosh(0.4)),
              1e-9);
  EXPECT_THROW(invert_sech_root_integral(1e6), Error);
}

TEST(Implicit, CorrectedSignSolvesTheEquation) {
  ImplicitRelation plus{1, 0, +1};
  EXPECT_LT(implicit_solution_check(plus, kImplicitPoints), 1e-4);
  ImplicitRelation plus2{2, 0.1, +1};
  EXPECT_LT(implicit_solution_check(plus2, kImplicitPoints), 1e-4);
}

TEST(Implicit, PublishedSignDoesNot) {
  // With -2t/c the relation solves u_tx = -sinh u.
  ImplicitRelation minus{1, 0, -1};
  EXPECT_GT(implicit_solution_check(minus, kImplicitPoints), 0.1);
}

TEST(Implicit, RejectsZeroSpeed) {
  EXPECT_THROW(implicit_solution_check(ImplicitRelation{0, 0, 1}, kImplicitPoints), std::invalid_argument);
}

// Randomized properties --------------------------------------------------------

TEST(SeriesProperties, ClassificationMatchesBruteForce) {
  ExprGen gen(701);
  Ranking r = Ranking::default_for(2);
  for (int i = 0; i < 200; ++i) {
    std::vector<Equation> eqs;
    std::set<MultiIndex> leads;
    for (int k = gen.uniform(1, 3); k > 0; --k) {
      MultiIndex lead = gen.index(3);
      if (leads.insert(lead).second) eqs.push_back(Equation{"e" + std::to_string(eqs.size()), JetVar{0, lead}, Expr()});
    }
    DiffSystem s(eqs, r, 1);
    unsigned horizon = static_cast<unsigned>(gen.uniform(0, 5));
    JetClassification c = classify(s, horizon);
    ASSERT_EQ(sorted(c.principal), sorted(brute_force_principal(s, horizon)));
    ASSERT_EQ(c.principal.size() + c.parametric.size(), multi_indices_up_to(2, horizon).size());
  }
}

TEST(SeriesProperties, TableDoesNotDependOnEvaluationOrder) {
  ExprGen gen(702);
  DiffSystem s = s12();
  std::uniform_real_distribution<double> value(0.3, 1.5);
  for (int i = 0; i < 200; ++i) {
    std::map<JetVar, double> parametric = {{J(0, 0), value(gen.rng())}, {J(0, 1), value(gen.rng())}};
    SeriesSolution reference = evaluate_point(s, {0, 0}, parametric, 5);
    SeriesOptions shuffled;
    shuffled.shuffle_seed = static_cast<std::uint64_t>(i);
    SeriesSolution other = evaluate_point(s, {0, 0}, parametric, 5, shuffled);
    ASSERT_EQ(reference.values, other.values);
  }
}

TEST(SeriesProperties, InverseOfTheIntegral) {
  ExprGen gen(703);
  std::uniform_real_distribution<double> u(-6, 6);
  for (int i = 0; i < 200; ++i) {
    double v = u(gen.rng());
    ASSERT_NEAR(invert_sech_root_integral(sech_root_integral(v)), v, 1e-9);
  }
}
