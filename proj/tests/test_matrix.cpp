#include <gtest/gtest.h>

#include "galg/matrix.hpp"
#include "galg/parser.hpp"
#include "galg/sampling.hpp"
#include "oracles.hpp"

using namespace galg;

namespace {

const std::vector<std::string> kVars{"x1", "x2", "x3"};

Expr p(const char* s) { return parse(s, kVars); }

const Expr x1 = Expr::variable("x1");
const Expr x2 = Expr::variable("x2");

// The reduction matrix and its transpose-Gram data, over the reflected chart.
FMatrix reduction() { return {{-x1, 1}, {0, 1}, {1, 0}}; }

} // namespace

TEST(Matrix, FactorizationOfTransformedSystem) {
    const FMatrix g{{x1, -1}, {0, -1}, {-1, 0}};
    const FMatrix anchor{{1, 0, 0}, {x1, x2, 1}};
    const FMatrix expected{{0, -x2, -1}, {-x1, -x2, -1}, {-1, 0, 0}};
    EXPECT_EQ(matmul(g, anchor), expected);
}

TEST(Matrix, IdentityIsNeutral) {
    const FMatrix a = reduction();
    EXPECT_EQ(FMatrix::identity(3) * a, a);
    EXPECT_EQ(a * FMatrix::identity(2), a);
}

TEST(Matrix, DimensionMismatch) { EXPECT_THROW(reduction() * reduction(), DimensionError); }

TEST(Matrix, GramOfReduction) {
    const FMatrix r = reduction();
    const FMatrix expected{{1 + x1 * x1, -x1}, {-x1, 2}};
    EXPECT_EQ(r.transpose() * r, expected);
}

TEST(Matrix, DeterminantExamples) {
    const FMatrix r = reduction();
    EXPECT_EQ(determinant(r.transpose() * r), 2 + x1 * x1);
    EXPECT_EQ(determinant(FMatrix::identity(2)), Expr(1));
}

TEST(Matrix, TransformedSystemIsSingular) {
    // It factors through a 3x2 matrix, so its rank is at most 2.
    const FMatrix m{{0, -x2, -1}, {-x1, -x2, -1}, {-1, 0, 0}};
    const Expr det = determinant(m);
    Sampler s(5);
    for (int k = 0; k < 5; ++k) {
        const Point pt = s.point(kVars);
        EXPECT_EQ(evaluate(det, pt), oracle::permutation_determinant(oracle::at(m, pt)));
    }
    EXPECT_TRUE(det.is_zero());
}

TEST(Matrix, AdjugateInverseOfGram) {
    const FMatrix r = reduction();
    const FMatrix expected = (Expr(1) / (2 + x1 * x1)) * FMatrix{{2, x1}, {x1, 1 + x1 * x1}};
    EXPECT_EQ(adjugate_inverse(r.transpose() * r), expected);
    EXPECT_EQ(adjugate_inverse(FMatrix::identity(3)), FMatrix::identity(3));
}

TEST(Matrix, SingularInverseReportsDeterminant) {
    const FMatrix s{{x1, x1}, {x1, x1}};
    try {
        adjugate_inverse(s);
        FAIL() << "expected SingularMatrixError";
    } catch (const SingularMatrixError& e) {
        EXPECT_EQ(e.determinant(), "0");
    }
}

TEST(Matrix, LeftPseudoInverseExamples) {
    const FMatrix expected = (Expr(1) / (2 + x1 * x1)) * FMatrix{{-x1, x1, 2}, {1, 1 + x1 * x1, x1}};
    EXPECT_EQ(left_pseudo_inverse(reduction()), expected);
    EXPECT_EQ(left_pseudo_inverse(FMatrix::identity(3)), FMatrix::identity(3));
    const FMatrix column{{1}, {1}};
    const FMatrix half{{Expr(Rational(1, 2)), Expr(Rational(1, 2))}};
    EXPECT_EQ(left_pseudo_inverse(column), half);
}

TEST(Matrix, LeftPseudoInverseRejectsWideAndDeficient) {
    EXPECT_THROW(left_pseudo_inverse(reduction().transpose()), DimensionError);
    const FMatrix deficient{{x1, 2 * x1}, {1, 2}, {x2, 2 * x2}};
    try {
        left_pseudo_inverse(deficient);
        FAIL() << "expected SingularMatrixError";
    } catch (const SingularMatrixError& e) {
        EXPECT_EQ(e.determinant(), "0");
        EXPECT_NE(std::string(e.what()).find("det(R^t R) = 0"), std::string::npos);
    }
}

TEST(Matrix, RankDropLocus) {
    EXPECT_EQ(rank_drop_locus(reduction())->to_string(), "x1^2 + 2");
    EXPECT_FALSE(rank_drop_locus(FMatrix::identity(2)).has_value());
}

TEST(MatrixProperty, LeftPseudoInverseIsLeftInverse) {
    Sampler s(11);
    int accepted = 0;
    for (int k = 0; k < 40; ++k) {
        const std::size_t cols = static_cast<std::size_t>(s.integer(1, 3));
        const std::size_t rows = static_cast<std::size_t>(s.integer(static_cast<long>(cols), 4));
        FMatrix r(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) r(i, j) = s.polynomial_expr(kVars, 2, 2);
        FMatrix left;
        try {
            left = left_pseudo_inverse(r);
        } catch (const SingularMatrixError&) {
            continue;
        }
        ++accepted;
        ASSERT_EQ(left * r, FMatrix::identity(cols));
    }
    EXPECT_GT(accepted, 30);
}

TEST(MatrixProperty, AdjugateInverseMatchesNumericInverse) {
    Sampler s(12);
    for (int k = 0; k < 20; ++k) {
        FMatrix m(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m(i, j) = s.polynomial_expr(kVars, 1, 2);
        if (determinant(m).is_zero()) continue;
        const FMatrix inv = adjugate_inverse(m);
        auto entries = oracle::entries(inv);
        const Point pt = oracle::point_avoiding(s, kVars, entries);
        const auto numeric = oracle::gauss_jordan_inverse(oracle::at(m, pt));
        ASSERT_FALSE(numeric.empty());
        ASSERT_EQ(oracle::at(inv, pt), numeric);
    }
}

TEST(MatrixProperty, DeterminantIsMultiplicative) {
    Sampler s(13);
    for (int k = 0; k < 15; ++k) {
        FMatrix a(3, 3), b(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                a(i, j) = s.polynomial_expr(kVars, 1, 2);
                b(i, j) = s.rational_expr(kVars, 1, 2);
            }
        ASSERT_EQ(determinant(a * b), determinant(a) * determinant(b));
    }
}
