#include <gtest/gtest.h>

#include <cmath>

#include "dpass/format.hpp"
#include "dpass/jet.hpp"
#include "fixtures.hpp"

using namespace dpass;
using dpass::testing::ExprGen;
using dpass::testing::P;
using dpass::testing::same;

TEST(Diamond, Examples) {
  EXPECT_EQ(diamond(MultiIndex{1, 1}, MultiIndex{0, 3}), (MultiIndex{0, 2}));
  EXPECT_EQ(diamond(MultiIndex{0, 3}, MultiIndex{1, 1}), (MultiIndex{1, 0}));
  EXPECT_EQ(diamond(MultiIndex{2, 5}, MultiIndex{2, 5}), (MultiIndex{0, 0}));
}

TEST(Diamond, DimensionMismatchThrows) {
  EXPECT_THROW(diamond(MultiIndex{1, 1}, MultiIndex{1, 1, 0}), std::invalid_argument);
}

TEST(Divisibility, Examples) {
  EXPECT_EQ(divisibility(MultiIndex{1, 1}, MultiIndex{1, 3}), (MultiIndex{0, 2}));
  EXPECT_FALSE(divisibility(MultiIndex{1, 1}, MultiIndex{0, 3}).has_value());
  EXPECT_EQ(divisibility(MultiIndex{2, 1}, MultiIndex{2, 1}), (MultiIndex{0, 0}));
}

TEST(MultiIndexBasics, Enumeration) {
  auto all = multi_indices_up_to(2, 3);
  EXPECT_EQ(all.size(), 10u);
  EXPECT_EQ(all.front(), (MultiIndex{0, 0}));
  EXPECT_EQ(all.back().order(), 3u);
  EXPECT_EQ(multi_indices_up_to(3, 2).size(), 10u);
  EXPECT_EQ((MultiIndex{1, 2}).to_string(), "[1,2]");
}

TEST(TotalDerivative, Examples) {
  EXPECT_EQ(total_derivative(P("u[1,1] - sinh(u)"), 1), P("u[1,2] - cosh(u)*u[0,1]"));
  EXPECT_TRUE(total_derivative(P("r"), 0).is_zero_literal());
  EXPECT_TRUE(total_derivative(Expr(Rational(7, 3)), 0).is_zero_literal());
  EXPECT_EQ(total_derivative(P("u[0,3] - 1/2*u[0,1]^3"), 0), P("u[1,3] - 3/2*u[0,1]^2*u[1,1]"));
  EXPECT_EQ(total_derivative(P("x1*x2^2"), 1), P("2*x1*x2"));
}

TEST(ApplyPower, Examples) {
  Expr f = P("u[1,1] - sinh(u)");
  EXPECT_EQ(apply_power(f, MultiIndex{0, 0}), f);
  EXPECT_EQ(apply_power(P("u"), MultiIndex{1, 1}), P("u[1,1]"));
  EXPECT_EQ(apply_power(f, MultiIndex{0, 2}), P("u[1,3] - cosh(u)*u[0,2] - sinh(u)*u[0,1]^2"));
}

TEST(ApplyPower, MatchesFiniteDifferencesOnAPolynomialSolution) {
  // u = t^2 x + sin-free polynomial so every jet value is exact.
  Expr f = P("u[1,1]*u + x1*u[0,1]^2");
  Expr d = apply_power(f, MultiIndex{1, 1});
  auto jet_value = [](const JetVar& v, double t, double x) {
    // u(t, x) = t^2 x + x^3
    unsigned a = v.order[0];
    unsigned b = v.order[1];
    double r = 0;
    // t^2 x
    if (a <= 2 && b <= 1) {
      double c = (a == 0 ? t * t : a == 1 ? 2 * t : 2.0);
      c *= (b == 0 ? x : 1.0);
      r += c;
    }
    // x^3
    if (a == 0 && b <= 3) {
      static const double k[] = {1, 3, 6, 6};
      r += k[b] * std::pow(x, 3 - static_cast<int>(b));
    }
    return r;
  };
  auto value = [&](const Expr& e, double t, double x) {
    Assignment at;
    for (const auto& a : depends_on(e)) {
      if (a.kind() == Atom::Kind::Independent) at.emplace(a, a.axis() == 0 ? t : x);
      if (a.kind() == Atom::Kind::Jet) at.emplace(a, jet_value(a.jet_var(), t, x));
    }
    return eval(e, at);
  };
  double t = 0.7;
  double x = 0.4;
  double h = 1e-4;
  double fd = (value(f, t + h, x + h) - value(f, t + h, x - h) - value(f, t - h, x + h) + value(f, t - h, x - h)) /
              (4 * h * h);
  EXPECT_NEAR(value(d, t, x), fd, 1e-5);
}

TEST(Commutativity, Examples) {
  EXPECT_TRUE(commutativity_check(P("u[1,1] - sinh(u)"), 0, 1));
  EXPECT_TRUE(commutativity_check(P("u[1,0] - 2*cosh(u)/u[0,1]"), 0, 1));
  EXPECT_TRUE(commutativity_check(P("x1*exp(u[0,1])/(1 + u^2)"), 0, 1));
}

// Randomized properties --------------------------------------------------------

TEST(JetProperties, MonoidActionLaws) {
  ExprGen gen(201, 1);
  for (int i = 0; i < 200; ++i) {
    Expr e = gen.polynomial(2);
    MultiIndex a = gen.index(1);
    MultiIndex b = gen.index(1);
    ASSERT_EQ(apply_power(e, MultiIndex{0, 0}), e);
    ASSERT_EQ(apply_power(apply_power(e, a), b), apply_power(e, a + b)) << format(e);
  }
}

TEST(JetProperties, DiamondMaxIdentity) {
  ExprGen gen(202);
  for (int i = 0; i < 500; ++i) {
    MultiIndex a = gen.index(6);
    MultiIndex b = gen.index(6);
    MultiIndex m = lcm(a, b);
    ASSERT_EQ(a + diamond(a, b), m);
    ASSERT_EQ(b + diamond(b, a), m);
    ASSERT_EQ(divisibility(a, m), diamond(a, b));
  }
}

TEST(JetProperties, TotalDerivativesCommute) {
  ExprGen gen(203);
  for (int i = 0; i < 200; ++i) {
    Expr e = gen.expr();
    ASSERT_TRUE(commutativity_check(e, 0, 1)) << format(e);
  }
}

TEST(JetProperties, Leibniz) {
  ExprGen gen(204);
  for (int i = 0; i < 200; ++i) {
    Expr a = gen.expr();
    Expr b = gen.expr();
    std::size_t k = static_cast<std::size_t>(gen.uniform(0, 1));
    Expr lhs = total_derivative(a * b, k);
    Expr rhs = a * total_derivative(b, k) + total_derivative(a, k) * b;
    ASSERT_TRUE(same(lhs, rhs)) << format(a) << " | " << format(b);
  }
}

TEST(JetProperties, ShiftsJetCoordinates) {
  for (const auto& alpha : multi_indices_up_to(2, 5)) {
    for (std::size_t k = 0; k < 2; ++k) {
      ASSERT_EQ(total_derivative(Expr::jet(0, alpha), k), Expr::jet(0, alpha + MultiIndex::unit(2, k)));
    }
  }
  EXPECT_EQ(total_derivative(Expr::independent(0), 0), Expr(1));
  EXPECT_TRUE(total_derivative(Expr::independent(0), 1).is_zero_literal());
}
