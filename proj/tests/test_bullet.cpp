#include <gtest/gtest.h>

#include "galg/bullet.hpp"
#include "galg/sampling.hpp"

using namespace galg;

namespace {

const Chart kPlane("P", {"x1", "x2"});

Expr v(const char* n) { return Expr::variable(n); }

Section random_field(Sampler& s, const Chart& c, unsigned degree = 2) {
    std::vector<Expr> coeffs(c.dimension());
    for (auto& e : coeffs) e = s.polynomial_expr(c.coords(), degree, 3);
    return Section(Bundle::tangent(c), std::move(coeffs));
}

FMatrix random_endomorphism(Sampler& s, const Chart& c) {
    FMatrix m(c.dimension(), c.dimension());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = s.polynomial_expr(c.coords(), 1, 2);
    return m;
}

} // namespace

TEST(Bullet, IdentityEndomorphismGivesLieBracket) {
    Sampler s(31);
    const BulletInstance b(kPlane, FMatrix::identity(2));
    for (int k = 0; k < 10; ++k) {
        const Section x = random_field(s, kPlane), y = random_field(s, kPlane);
        ASSERT_EQ(bullet_bracket(b, x, y).coeffs(), lie_bracket(x.coeffs(), y.coeffs(), kPlane));
    }
}

TEST(Bullet, OperatorLevelMatchesReducedForm) {
    Sampler s(32);
    for (int k = 0; k < 10; ++k) {
        const BulletInstance b(kPlane, random_endomorphism(s, kPlane));
        const Section x = random_field(s, kPlane), y = random_field(s, kPlane);
        ASSERT_EQ(bullet_bracket(b, x, y), bullet_bracket_reduced(b, x, y));
    }
}

TEST(BulletProperty, LeibnizInSecondSlot) {
    Sampler s(33);
    for (int k = 0; k < 10; ++k) {
        const BulletInstance b(kPlane, random_endomorphism(s, kPlane));
        const Section x = random_field(s, kPlane), y = random_field(s, kPlane);
        const Expr f = s.rational_expr(kPlane.coords(), 2, 2);
        const Section rx = apply_endomorphism(b, x);
        const Section lhs = bullet_bracket(b, x, f * y);
        const Section rhs = f * bullet_bracket(b, x, y) + apply_vector_field(rx.coeffs(), kPlane, f) * y;
        ASSERT_EQ(lhs, rhs);
    }
}

TEST(BulletProperty, SelfBracketVanishes) {
    Sampler s(34);
    for (int k = 0; k < 10; ++k) {
        const BulletInstance b(kPlane, random_endomorphism(s, kPlane));
        const Section x = random_field(s, kPlane);
        const Expr f = s.rational_expr(kPlane.coords(), 1, 2);
        ASSERT_TRUE(bullet_bracket(b, f * x, f * x).is_zero());
    }
}

TEST(BulletProperty, ResultIsDerivationOnProducts) {
    Sampler s(35);
    for (int k = 0; k < 10; ++k) {
        const BulletInstance b(kPlane, random_endomorphism(s, kPlane));
        const Section z = bullet_bracket(b, random_field(s, kPlane), random_field(s, kPlane));
        const Expr f = s.rational_expr(kPlane.coords(), 2, 2), g = s.polynomial_expr(kPlane.coords(), 2, 3);
        ASSERT_EQ(apply_vector_field(z.coeffs(), kPlane, f * g),
                  apply_vector_field(z.coeffs(), kPlane, f) * g + f * apply_vector_field(z.coeffs(), kPlane, g));
    }
}

TEST(BulletJacobi, ScalarAndZeroEndomorphismsPass) {
    const Chart space("S", {"x1", "x2", "x3"});
    for (long c : {0L, 1L, 3L, -2L}) {
        const BulletInstance b(space, Expr(c) * FMatrix::identity(3));
        const AxiomReport r = check_bullet_jacobi(b, {.samples = 5});
        EXPECT_TRUE(r.all_pass()) << "c = " << c << ": " << r.at("jacobi").witness;
    }
}

TEST(BulletJacobi, DiagonalInstanceIsReported) {
    // No verdict is assumed; the report must be well formed either way.
    const BulletInstance b(kPlane, FMatrix{{v("x1"), 0}, {0, 1}});
    const AxiomReport r = check_bullet_jacobi(b);
    ASSERT_EQ(r.checks().size(), 1u);
    const AxiomCheck& j = r.at("jacobi");
    EXPECT_EQ(j.pass, j.witness.empty());
    std::cout << "diag(x1, 1): jacobi " << (j.pass ? "holds" : "fails, " + j.witness) << '\n';
}

TEST(Bullet, Validation) {
    EXPECT_THROW(BulletInstance(kPlane, FMatrix::identity(3)), DimensionError);
    EXPECT_THROW(BulletInstance(kPlane, FMatrix{{v("y"), 0}, {0, 1}}), InvariantError);
}
