#include <gtest/gtest.h>

#include "galg/algebroid.hpp"
#include "galg/sampling.hpp"
#include "oracles.hpp"

using namespace galg;

namespace {

const std::vector<std::string> kX{"x1", "x2", "x3"};
const Chart kSigma("Sigma", kX);
const Bundle kF(kSigma, {"t1", "t2"});

Expr v(const char* n) { return Expr::variable(n); }

FMatrix anchor() { return {{1, 0, 0}, {v("x1"), v("x2"), 1}}; }

CoordMap reflection() {
    std::vector<Expr> neg{-v("x1"), -v("x2"), -v("x3")};
    return make_coord_map(kSigma, kSigma, neg, neg);
}

StructureFunctions classical_structure() {
    StructureFunctions c(2);
    c.set(0, 0, 1, 1);
    return c;
}

AlgebroidModel classical_model() { return AlgebroidModel::classical(kF, anchor(), classical_structure()); }

AlgebroidModel reflected_model(const StructureFunctions& c) {
    return AlgebroidModel(kF, anchor(), c, reflection(), CoordMap::identity(kSigma));
}

Section random_section(Sampler& s, const Bundle& b) {
    std::vector<Expr> c(b.rank());
    for (auto& e : c) e = s.polynomial_expr(b.base().coords(), 2, 3);
    return Section(b, std::move(c));
}

// Vector field of u under the anchor, computed without the algebroid code.
std::vector<Expr> anchored_field(const FMatrix& rho, const Section& u) {
    std::vector<Expr> x(rho.cols());
    for (std::size_t i = 0; i < rho.cols(); ++i)
        for (std::size_t a = 0; a < rho.rows(); ++a) x[i] += u[a] * rho(a, i);
    return x;
}

} // namespace

TEST(AnchorDerivation, IdentityBaseMapIsPlainDirectionalDerivative) {
    Sampler s(21);
    const AlgebroidModel a = classical_model();
    for (int k = 0; k < 10; ++k) {
        const Section u = random_section(s, kF);
        const Expr f = s.rational_expr(kX, 2, 3);
        Expr expected;
        const auto x = anchored_field(anchor(), u);
        for (std::size_t i = 0; i < 3; ++i) expected += x[i] * differentiate(f, kX[i]);
        ASSERT_EQ(anchor_derivation(a, u, f), expected);
    }
}

TEST(AnchorDerivation, ReflectedBaseMapExamples) {
    const AlgebroidModel a = reflected_model(StructureFunctions(2));
    EXPECT_EQ(anchor_derivation(a, a.frame_element(0), v("x1")), Expr(-1));
    EXPECT_EQ(anchor_derivation(a, a.frame_element(1), v("x3")), Expr(-1));
}

TEST(InducedAnchor, IdentityBaseMapGivesAnchor) {
    EXPECT_EQ(induced_anchor(classical_model()).components(), anchor());
}

TEST(InducedAnchor, ReflectionNegatesAnchor) {
    const AlgebroidModel a = reflected_model(StructureFunctions(2));
    const VBMorphism theta = induced_anchor(a);
    EXPECT_EQ(theta.components(), -anchor());

    // Oracle: push the anchor image forward along the reflection, then read
    // it back on the source chart.
    const Bundle t = Bundle::tangent(kSigma);
    const VBMorphism ts(t, t, reflection(), -FMatrix::identity(3));
    const VBMorphism rho(kF, t, CoordMap::identity(kSigma), anchor());
    const VBMorphism pushed = compose(ts, rho);
    Sampler s(22);
    for (int k = 0; k < 10; ++k) {
        const Section z = random_section(s, kF);
        const Section image = apply_morphism(pushed, z);
        std::vector<Expr> back;
        for (const auto& c : image.coeffs()) back.push_back(pullback(c, reflection()));
        const Section direct = apply_morphism(theta, z);
        ASSERT_EQ(Section(t, back), direct);
        const Point p = s.point(kX);
        for (std::size_t i = 0; i < 3; ++i) ASSERT_EQ(evaluate(back[i], p), evaluate(direct[i], p));
    }
}

TEST(InducedAnchorProperty, RepresentsAnchorDerivation) {
    Sampler s(23);
    const Chart c("C", {"x1", "x2"});
    const Bundle f(c, {"t1", "t2"});
    const CoordMap h = make_coord_map(c, c, {v("x1") + v("x2") * v("x2"), 2 * v("x2") - 1},
                                      {v("x1") - (v("x2") + 1) * (v("x2") + 1) / 4, (v("x2") + 1) / 2});
    const FMatrix rho{{v("x2"), 1}, {v("x1") * v("x1"), -v("x1")}};
    const AlgebroidModel a(f, rho, StructureFunctions(2), h, CoordMap::identity(c));
    const FMatrix theta = induced_anchor(a).components();
    for (int k = 0; k < 15; ++k) {
        const Section u = random_section(s, f);
        const Expr g = s.rational_expr(c.coords(), 2, 3);
        const auto x = anchored_field(theta, u);
        const Expr expected = x[0] * differentiate(g, "x1") + x[1] * differentiate(g, "x2");
        ASSERT_EQ(anchor_derivation(a, u, g), expected);
    }
}

TEST(Bracket, ClassicalFrameBracket) {
    const AlgebroidModel a = classical_model();
    EXPECT_EQ(bracket(a, a.frame_element(0), a.frame_element(1)), a.frame_element(0));
    // Oracle: vector-field bracket of the anchor images.
    const auto w = lie_bracket(anchor().row(0), anchor().row(1), kSigma);
    EXPECT_EQ(w, anchor().row(0));
    EXPECT_EQ(derive_structure_functions(kF, anchor()), classical_structure());
}

TEST(Bracket, LeibnizExample) {
    const AlgebroidModel a = classical_model();
    const Section lhs = bracket(a, a.frame_element(0), v("x1") * a.frame_element(1));
    EXPECT_EQ(lhs, Section(kF, {v("x1"), 1}));
    const auto field = lie_bracket(anchor().row(0), anchored_field(anchor(), Section(kF, {0, v("x1")})), kSigma);
    EXPECT_EQ(field, anchored_field(anchor(), lhs));
}

TEST(Bracket, ReflectedFrameHasOppositeStructure) {
    const StructureFunctions c = derive_structure_functions(kF, anchor(), reflection());
    EXPECT_EQ(c(0, 0, 1), Expr(-1));
    EXPECT_TRUE(c(1, 0, 1).is_zero());
    EXPECT_TRUE(check_axioms(reflected_model(c)).all_pass());
    const AxiomReport wrong = check_axioms(reflected_model(classical_structure()));
    EXPECT_FALSE(wrong.at("anchor-morphism").pass);
}

TEST(BracketProperty, AntisymmetricAndLeibniz) {
    Sampler s(24);
    const AlgebroidModel a = classical_model();
    for (int k = 0; k < 15; ++k) {
        const Section u = random_section(s, kF), w = random_section(s, kF);
        const Expr f = s.rational_expr(kX, 2, 2);
        ASSERT_TRUE(bracket(a, u, u).is_zero());
        ASSERT_TRUE((bracket(a, u, w) + bracket(a, w, u)).is_zero());
        ASSERT_TRUE((bracket(a, u, f * w) - f * bracket(a, u, w) - anchor_derivation(a, u, f) * w).is_zero());
    }
}

TEST(CheckAxioms, ClassicalModelPasses) {
    const AxiomReport r = check_axioms(classical_model());
    ASSERT_EQ(r.checks().size(), 4u);
    for (const auto& c : r.checks()) {
        EXPECT_TRUE(c.pass) << c.name << ": " << c.witness;
        EXPECT_TRUE(c.witness.empty());
    }
}

TEST(CheckAxioms, JacobiCounterexample) {
    const Chart line("L", {"x1"});
    const Bundle f(line, {"t1", "t2", "t3"});
    StructureFunctions c(3);
    c.set(0, 0, 1, 1).set(1, 0, 2, 1);
    const AlgebroidModel a = AlgebroidModel::classical(f, FMatrix(3, 1), c);
    const AxiomReport r = check_axioms(a);
    EXPECT_FALSE(r.all_pass());
    EXPECT_FALSE(r.at("jacobi").pass);
    EXPECT_EQ(r.at("jacobi").witness, "(t1, t2, t3): residual -t2");
    EXPECT_TRUE(r.at("antisymmetry").pass);
    EXPECT_TRUE(r.at("leibniz").pass);
}

TEST(StructureFunctions, AntisymmetryIsEnforced) {
    std::vector<Expr> data(8);
    data[1] = 1; // C^1_12 = 1 without C^1_21 = -1
    EXPECT_THROW(StructureFunctions::from_tensor(2, data), InvariantError);
    StructureFunctions c(2);
    EXPECT_THROW(c.set(0, 1, 1, 1), InvariantError);
}

TEST(AlgebroidModel, ShapeValidation) {
    EXPECT_THROW(AlgebroidModel::classical(kF, FMatrix(2, 2), StructureFunctions(2)), DimensionError);
    EXPECT_THROW(AlgebroidModel::classical(kF, anchor(), StructureFunctions(3)), DimensionError);
}

TEST(DeriveStructure, OpenFrameIsRejected) {
    // [d1, x1 d2 + d3] = d2 is no rational combination of d1 and x1 d2 + d3.
    const FMatrix rho{{1, 0, 0}, {0, v("x1"), 1}};
    EXPECT_THROW(derive_structure_functions(kF, rho), InvariantError);
}
