#pragma once

// Built-in data of the reflection example and the exact checks behind
// `verify-paper`.
//
// Charts: Sigma with coordinates x1..x3, and the reflected chart Sigma~
// with xt1..xt3, related by s_O(x) = -x.  The printed matrices live on
// Sigma~, except the reduction inverse g~, which is printed with the tilde
// dropped; it is compared after renaming xt -> x (a relabelling, not the
// substitution s_O, which would flip signs).
//
// Orientation: morphisms store rows indexed by the source frame, so a
// printed display "Gamma(phi)(t_1; t_2) = A (s_1; s_2; s_3)" is stored as A.
// Pure matrix identities (M~ = G P, the Gram matrix and its inverse, the
// left inverse) are checked on the printed matrices verbatim.

#include <cstddef>
#include <string>
#include <vector>

#include "galg/algebroid.hpp"
#include "galg/bundle.hpp"
#include "galg/control.hpp"
#include "galg/expr.hpp"
#include "galg/matrix.hpp"
#include "galg/sampling.hpp"

namespace galg {

struct ReflectionExample {
    Chart sigma;
    Chart sigma_tilde;
    ControlSystem original;      // (OP) on Sigma
    ControlSystem transformed;   // on Sigma~
    FMatrix factor_g;            // G, 3x2 on Sigma~
    FMatrix anchor_p;            // P, 2x3 on Sigma~
    FMatrix reflection_t;        // T = Ts_O
    FMatrix reduction_r;         // R, with G = T R
    FMatrix gram;                // R^t R as printed
    Expr gram_determinant;       // 2 + xt1^2
    FMatrix gram_inverse;        // (R^t R)^{-1} as printed
    FMatrix left_inverse;        // R_left^{-1} as printed
    FMatrix reduction_inverse;   // g~ as printed, in x coordinates
};

inline ReflectionExample reflection_example() {
    const auto x = [](int i) { return Expr::variable("x" + std::to_string(i)); };
    const auto xt = [](int i) { return Expr::variable("xt" + std::to_string(i)); };
    const std::vector<std::string> ys{"y1", "y2", "y3"};
    Expr lagrangian;
    for (const auto& y : ys) lagrangian += Expr::variable(y) * Expr::variable(y);
    lagrangian = Expr(Rational(1, 2)) * lagrangian;

    ReflectionExample d{
        Chart("Sigma", {"x1", "x2", "x3"}),
        Chart("Sigma~", {"xt1", "xt2", "xt3"}),
        {},
        {},
        FMatrix{{xt(1), -1}, {0, -1}, {-1, 0}},
        FMatrix{{1, 0, 0}, {xt(1), xt(2), 1}},
        -FMatrix::identity(3),
        FMatrix{{-xt(1), 1}, {0, 1}, {1, 0}},
        FMatrix{{1 + xt(1) * xt(1), -xt(1)}, {-xt(1), 2}},
        2 + xt(1) * xt(1),
        {},
        {},
        {},
    };
    const Expr inv_det = Expr(1) / (2 + xt(1) * xt(1));
    d.gram_inverse = inv_det * FMatrix{{2, xt(1)}, {xt(1), 1 + xt(1) * xt(1)}};
    d.left_inverse = inv_det * FMatrix{{-xt(1), xt(1), 2}, {1, 1 + xt(1) * xt(1), xt(1)}};
    d.reduction_inverse =
        (Expr(1) / (2 + x(1) * x(1))) * FMatrix{{x(1), -x(1), -2}, {-1, -1 - x(1) * x(1), -x(1)}};
    d.original = ControlSystem(d.sigma, ys, FMatrix{{0, -x(2), 1}, {-x(1), -x(2), 1}, {1, 0, 0}}, lagrangian);
    d.transformed =
        ControlSystem(d.sigma_tilde, ys, FMatrix{{0, -xt(2), -1}, {-xt(1), -xt(2), -1}, {-1, 0, 0}}, lagrangian);
    return d;
}

namespace detail {

inline AxiomCheck matrix_check(std::string name, const FMatrix& got, const FMatrix& expected, const std::string& what) {
    if (got.rows() != expected.rows() || got.cols() != expected.cols())
        return {std::move(name), false, what + ": shape " + got.shape() + ", expected " + expected.shape()};
    if (got == expected) return {std::move(name), true, {}};
    return {std::move(name), false, what + ": residual " + (got - expected).to_string()};
}

inline Substitution rename(const Chart& from, const Chart& to) {
    Substitution s;
    for (std::size_t i = 0; i < from.dimension(); ++i) s.emplace(from.coord(i), to.coordinate(i));
    return s;
}

template <class F>
AxiomCheck guarded(const std::string& name, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        return {name, false, std::string("error: ") + e.what()};
    }
}

inline AxiomCheck first_failure(std::string name, std::initializer_list<AxiomCheck> parts) {
    for (const auto& p : parts)
        if (!p.pass) return {std::move(name), false, p.witness};
    return {std::move(name), true, {}};
}

} // namespace detail

/// The ten exact identities of the reflection example.  Seed-independent.
inline AxiomReport verify_paper(const ReflectionExample& d = reflection_example()) {
    using detail::first_failure;
    using detail::guarded;
    using detail::matrix_check;
    AxiomReport report;
    const Chart& sig = d.sigma;
    const Chart& tsig = d.sigma_tilde;
    const Expr xt1 = tsig.coordinate(0);

    const auto s_o = [&] {
        std::vector<Expr> fwd, inv;
        for (std::size_t i = 0; i < 3; ++i) {
            fwd.push_back(-sig.coordinate(i));
            inv.push_back(-tsig.coordinate(i));
        }
        return make_coord_map(sig, tsig, fwd, inv);
    };

    report.add(guarded("transformed-system", [&]() -> AxiomCheck {
        const CoordMap s = s_o();
        const FMatrix pushed = (s.jacobian() * d.original.matrix()).map([&](const Expr& e) { return s.pushforward(e); });
        const AxiomCheck m = matrix_check("transformed-system", pushed, d.transformed.matrix(), "J (M o s_O^{-1})");
        if (m.pass && !verify_transform(d.original, d.transformed, s))
            return {"transformed-system", false, "verify_transform disagrees with the direct computation"};
        return m;
    }));

    report.add(guarded("factorization", [&] {
        return matrix_check("factorization", d.factor_g * d.anchor_p, d.transformed.matrix(), "G P - M~");
    }));

    const FMatrix gram = d.reduction_r.transpose() * d.reduction_r;
    report.add(guarded("gram", [&] { return matrix_check("gram", gram, d.gram, "R^t R"); }));

    report.add(guarded("determinant", [&]() -> AxiomCheck {
        const Expr det = determinant(gram);
        if (det == d.gram_determinant && det == 2 + xt1 * xt1) return {"determinant", true, {}};
        return {"determinant", false, "det(R^t R) = " + det.to_string() + ", expected " + d.gram_determinant.to_string()};
    }));

    report.add(guarded("gram-inverse", [&] {
        const FMatrix inv = adjugate_inverse(gram);
        return first_failure("gram-inverse", {matrix_check("gram-inverse", inv, d.gram_inverse, "(R^t R)^{-1}"),
                                              matrix_check("gram-inverse", gram * d.gram_inverse,
                                                           FMatrix::identity(2), "R^t R (R^t R)^{-1} - I")});
    }));

    report.add(guarded("left-inverse", [&] {
        const FMatrix left = left_pseudo_inverse(d.reduction_r);
        return first_failure("left-inverse", {matrix_check("left-inverse", left, d.left_inverse, "R_left^{-1}"),
                                              matrix_check("left-inverse", d.left_inverse * d.reduction_r,
                                                           FMatrix::identity(2), "R_left^{-1} R - I")});
    }));

    report.add(guarded("reduction-inverse", [&] {
        // g~ = R_left^{-1} T^{-1}, printed with xt relabelled as x.
        const Substitution to_x = detail::rename(tsig, sig);
        const FMatrix g_tilde = substitute(d.left_inverse * adjugate_inverse(d.reflection_t), to_x);
        const FMatrix g_x = substitute(d.factor_g, to_x);
        return first_failure("reduction-inverse",
                             {matrix_check("reduction-inverse", g_tilde, d.reduction_inverse, "g~"),
                              matrix_check("reduction-inverse", d.reduction_inverse * g_x, FMatrix::identity(2),
                                           "g~ g - I")});
    }));

    report.add(guarded("composition", [&] {
        const CoordMap s = s_o();
        const Bundle tan = Bundle::tangent(sig);
        const Bundle ttan = Bundle::tangent(tsig);
        const Bundle f(tsig, {"t1", "t2"});
        const VBMorphism ts(tan, ttan, s, d.reflection_t.map([&](const Expr& e) { return s.pullback(e); }));
        const VBMorphism r(ttan, f, CoordMap::identity(tsig), d.reduction_r);
        const VBMorphism g(tan, f, s, d.factor_g.map([&](const Expr& e) { return s.pullback(e); }));
        const VBMorphism c = compose(r, ts);
        AxiomCheck functional{"composition", true, {}};
        Sampler sampler(5);
        for (int k = 0; k < 5 && functional.pass; ++k) {
            std::vector<Expr> z(3);
            for (auto& e : z) e = sampler.polynomial_expr(sig.coords(), 2, 3);
            const Section zs(tan, z);
            const Section lhs = apply_morphism(g, zs);
            const Section rhs = apply_morphism(r, apply_morphism(ts, zs));
            if (!(lhs == rhs)) functional = {"composition", false, "Gamma(g, s_O)(z) - Gamma(R, Id)(Gamma(Ts_O, s_O)(z)) = " + (lhs - rhs).to_string()};
        }
        return first_failure("composition",
                             {matrix_check("composition", c.components(), g.components(), "components of the composite"),
                              c.base_map() == g.base_map()
                                  ? AxiomCheck{"composition", true, {}}
                                  : AxiomCheck{"composition", false, "base map of the composite is not s_O"},
                              matrix_check("composition", d.reflection_t * d.reduction_r, d.factor_g, "T R - G"),
                              functional});
    }));

    report.add(guarded("bracket", [&]() -> AxiomCheck {
        const Bundle f(tsig, {"t1", "t2"});
        const StructureFunctions c = derive_structure_functions(f, d.anchor_p);
        const AlgebroidModel a = AlgebroidModel::classical(f, d.anchor_p, c);
        const Section b = bracket(a, a.frame_element(0), a.frame_element(1));
        if (!(b == a.frame_element(0))) return {"bracket", false, "[t1, t2] = " + b.to_string()};
        return {"bracket", true, {}};
    }));

    report.add(guarded("induced-anchor", [&] {
        // h = s_O viewed on the single chart Sigma~.
        std::vector<Expr> neg;
        for (std::size_t i = 0; i < 3; ++i) neg.push_back(-tsig.coordinate(i));
        const CoordMap h = make_coord_map(tsig, tsig, neg, neg);
        const Bundle f(tsig, {"t1", "t2"});
        const Bundle ttan = Bundle::tangent(tsig);
        const AlgebroidModel a(f, d.anchor_p, StructureFunctions(2), h, CoordMap::identity(tsig));
        const VBMorphism theta = induced_anchor(a);
        const VBMorphism rho(f, ttan, CoordMap::identity(tsig), d.anchor_p);
        const VBMorphism th(ttan, ttan, h, d.reflection_t);
        const VBMorphism pushed = compose(th, rho);
        AxiomCheck functional{"induced-anchor", true, {}};
        Sampler sampler(10);
        for (int k = 0; k < 6 && functional.pass; ++k) {
            std::vector<Expr> z(2);
            for (auto& e : z) e = k < 2 ? Expr(k == 0 ? 1 : 0) : sampler.polynomial_expr(tsig.coords(), 2, 3);
            if (k == 1) z[1] = 1;
            const Section zs(f, z);
            // Gamma(Th, h) moves the base point; read the image back along h.
            const Section image = apply_morphism(pushed, zs);
            std::vector<Expr> back;
            for (const auto& e : image.coeffs()) back.push_back(h.pullback(e));
            const Section lhs(ttan, back);
            const Section rhs = apply_morphism(theta, zs);
            if (!(lhs == rhs))
                functional = {"induced-anchor", false, "Gamma(theta, Id)(z) - h*(Gamma(Th, h)(Gamma(rho, Id)(z))) = " +
                                                           (rhs - lhs).to_string()};
        }
        return first_failure("induced-anchor",
                             {matrix_check("induced-anchor", theta.components(), -d.anchor_p, "theta + rho"), functional});
    }));

    return report;
}

} // namespace galg
