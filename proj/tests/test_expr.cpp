#include <gtest/gtest.h>

#include "galg/expr.hpp"
#include "galg/parser.hpp"
#include "galg/sampling.hpp"
#include "oracles.hpp"

using namespace galg;
using galg::oracle::point_avoiding;
using galg::oracle::vars3;

namespace {

Expr x1 = Expr::variable("x1");
Expr x2 = Expr::variable("x2");
Expr x3 = Expr::variable("x3");

Expr p(const char* text) { return parse(text, {"x1", "x2", "x3"}); }

} // namespace

TEST(Expr, CanonicalCancellation) {
    EXPECT_EQ(x1 / x1, Expr(1));
    EXPECT_EQ(x2 - x2, Expr(0));
    EXPECT_TRUE(equals((x1 + 1).pow(2), x1 * x1 + 2 * x1 + 1));
    EXPECT_EQ(((x1 * x1 - 1) / (x1 - 1)).to_string(), "x1 + 1");
}

TEST(Expr, DenominatorIsMonic) {
    const Expr e = x1 / (2 * x2 + 4);
    EXPECT_EQ(e.denominator().leading_coefficient(), 1);
    EXPECT_EQ(e.to_string(), "1/2*x1/(x2 + 2)");
    EXPECT_EQ((Expr(-3) / (-6 * x1)).to_string(), "1/2/x1");
}

TEST(Expr, DivisionByZeroThrows) { EXPECT_THROW(x1 / (x2 - x2), DomainError); }

TEST(Expr, DifferentiateExamples) {
    EXPECT_EQ(differentiate(x1 * x2, "x1"), x2);
    EXPECT_EQ(differentiate(2 + x1 * x1, "x1"), 2 * x1);
    EXPECT_EQ(differentiate(-x1, "x1"), Expr(-1));
    EXPECT_EQ(differentiate(Expr(5), "x1"), Expr(0));
    EXPECT_EQ(differentiate(1 / x1, "x1"), Expr(-1) / (x1 * x1));
}

TEST(Expr, SubstituteExamples) {
    EXPECT_EQ(substitute(x1 * x1, {{"x1", -x1}}), x1 * x1);
    EXPECT_EQ(substitute(x2, {{"x1", -x1}, {"x2", -x2}, {"x3", -x3}}), -x2);
    EXPECT_THROW(substitute(1 / x1, {{"x1", 0 * x1}}), DomainError);
    EXPECT_EQ(substitute(x1 / (x2 + 1), {{"x2", 1 / x1}}), x1 * x1 / (x1 + 1));
}

TEST(Expr, SubstituteIsSimultaneous) {
    EXPECT_EQ(substitute(x1 - 2 * x2, {{"x1", x2}, {"x2", x1}}), x2 - 2 * x1);
}

TEST(Expr, EvaluateExamples) {
    EXPECT_EQ(evaluate(2 + x1 * x1, {{"x1", 3}}), 11);
    EXPECT_EQ(evaluate(2 + x1 * x1, {{"x1", 1}}), 3);
    EXPECT_THROW(evaluate(1 / x1, {{"x1", 0}}), DomainError);
    EXPECT_THROW(evaluate(x1 + x2, {{"x1", 0}}), DomainError);
}

TEST(Expr, EqualsExamples) {
    EXPECT_TRUE(equals((x1 + 1).pow(2), p("x1^2 + 2*x1 + 1")));
    EXPECT_TRUE(equals(x1 / x1, Expr(1)));
    EXPECT_FALSE(equals(x1, x2));
}

// Randomized properties, checked exactly.

class ExprProperty : public ::testing::Test {
protected:
    Sampler s{2024};
    std::vector<std::string> vars = vars3();
    Expr random() { return s.rational_expr(vars, 2, 3); }
};

TEST_F(ExprProperty, RingAxiomsAtRandomPoints) {
    for (int k = 0; k < 60; ++k) {
        const Expr a = random(), b = random(), c = random();
        const Point pt = point_avoiding(s, vars, {a, b, c});
        const Rational va = evaluate(a, pt), vb = evaluate(b, pt), vc = evaluate(c, pt);
        ASSERT_EQ(evaluate(a + b, pt), va + vb);
        ASSERT_EQ(evaluate(a * b, pt), va * vb);
        ASSERT_EQ(evaluate(a * (b + c), pt), va * (vb + vc));
        ASSERT_EQ(evaluate(a - c, pt), va - vc);
    }
}

TEST_F(ExprProperty, NormalizationIsIdempotent) {
    for (int k = 0; k < 60; ++k) {
        const Expr a = random();
        const Expr again = Expr::fraction(a.numerator(), a.denominator());
        ASSERT_EQ(again, a);
        const Expr scaled = Expr::fraction(a.numerator().scaled(-7), a.denominator().scaled(-7));
        ASSERT_EQ(scaled, a);
    }
}

TEST_F(ExprProperty, DerivationLaw) {
    for (int k = 0; k < 40; ++k) {
        const Expr a = random(), b = random();
        for (const auto& v : vars)
            ASSERT_EQ(differentiate(a * b, v), differentiate(a, v) * b + a * differentiate(b, v));
    }
}

TEST_F(ExprProperty, MixedPartialsCommute) {
    for (int k = 0; k < 40; ++k) {
        const Expr a = random();
        ASSERT_EQ(differentiate(differentiate(a, "x1"), "x2"), differentiate(differentiate(a, "x2"), "x1"));
    }
}

TEST_F(ExprProperty, ChainRule) {
    for (int k = 0; k < 30; ++k) {
        const Expr e = random();
        Substitution m;
        for (const auto& v : vars) m[v] = s.polynomial_expr(vars, 2, 3);
        Expr composed;
        try {
            composed = substitute(e, m);
        } catch (const DomainError&) {
            continue;
        }
        for (const auto& v : vars) {
            Expr expansion;
            for (const auto& w : vars) expansion += substitute(differentiate(e, w), m) * differentiate(m[w], v);
            ASSERT_EQ(differentiate(composed, v), expansion);
        }
    }
}

TEST_F(ExprProperty, PrintParseRoundTrip) {
    for (int k = 0; k < 60; ++k) {
        const Expr a = random();
        ASSERT_EQ(parse(a.to_string(), vars), a) << a.to_string();
        ASSERT_EQ(parse(a.to_string(), vars).to_string(), a.to_string());
    }
}
