#pragma once

// The bullet bracket on Der(F), F = rational functions in m variables.
//
// Der(F) is free with basis d_i; a module endomorphism rho is an m x m
// matrix whose row i is rho(d_i).  With X . Y the second-order operator
//
//     (X . Y)(f) = Y^i X(d_i f) + rho(X)(Y^i) d_i f,
//
// the bracket is [X, Y] = X . Y - Y . X.  The second-order parts cancel by
// symmetry of mixed partials, which bullet_bracket() re-confirms on a
// product test function before returning the first-order coefficients.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "galg/algebroid.hpp"
#include "galg/bundle.hpp"
#include "galg/expr.hpp"
#include "galg/matrix.hpp"
#include "galg/sampling.hpp"

namespace galg {

class BulletInstance {
public:
    BulletInstance() = default;
    BulletInstance(Chart chart, FMatrix rho) : chart_(std::move(chart)), rho_(std::move(rho)) {
        const std::size_t m = chart_.dimension();
        if (rho_.rows() != m || rho_.cols() != m)
            throw DimensionError("bullet endomorphism must be " + std::to_string(m) + "x" + std::to_string(m) +
                                 ", got " + rho_.shape());
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                for (const auto& v : rho_(i, j).variables())
                    if (std::find(chart_.coords().begin(), chart_.coords().end(), v) == chart_.coords().end())
                        throw InvariantError("endomorphism entry uses undeclared variable '" + v + "'");
    }

    const Chart& chart() const noexcept { return chart_; }
    const FMatrix& rho() const noexcept { return rho_; }
    std::size_t size() const noexcept { return chart_.dimension(); }
    Bundle derivations() const { return Bundle::tangent(chart_); }

private:
    Chart chart_;
    FMatrix rho_;
};

/// rho(X) = X^i rho(d_i).
inline Section apply_endomorphism(const BulletInstance& b, const Section& x) {
    std::vector<Expr> out(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
        Expr s;
        for (std::size_t i = 0; i < b.size(); ++i)
            if (!x[i].is_zero() && !b.rho()(i, j).is_zero()) s += x[i] * b.rho()(i, j);
        out[j] = std::move(s);
    }
    return Section(b.derivations(), std::move(out));
}

/// (X . Y)(f) = Y^i X(d_i f) + rho(X)(Y^i) d_i f.
inline Expr bullet_product(const BulletInstance& b, const Section& x, const Section& y, const Expr& f) {
    const Chart& c = b.chart();
    const std::vector<Expr> rx = apply_endomorphism(b, x).coeffs();
    Expr s;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Expr di = differentiate(f, c.coord(i));
        if (di.is_zero()) continue;
        if (!y[i].is_zero()) s += y[i] * apply_vector_field(x.coeffs(), c, di);
        s += apply_vector_field(rx, c, y[i]) * di;
    }
    return s;
}

/// (X . Y - Y . X)(f) at the operator level.
inline Expr bullet_commutator(const BulletInstance& b, const Section& x, const Section& y, const Expr& f) {
    return bullet_product(b, x, y, f) - bullet_product(b, y, x, f);
}

/// First-order closed form (rho(X)(Y^i) - rho(Y)(X^i)) d_i.
inline Section bullet_bracket_reduced(const BulletInstance& b, const Section& x, const Section& y) {
    const Chart& c = b.chart();
    const std::vector<Expr> rx = apply_endomorphism(b, x).coeffs();
    const std::vector<Expr> ry = apply_endomorphism(b, y).coeffs();
    std::vector<Expr> out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        out[i] = apply_vector_field(rx, c, y[i]) - apply_vector_field(ry, c, x[i]);
    return Section(b.derivations(), std::move(out));
}

/// [X, Y] read off from the operator X . Y - Y . X on coordinate functions,
/// after confirming it acts as a derivation on a product f * g.
inline Section bullet_bracket(const BulletInstance& b, const Section& x, const Section& y) {
    const Chart& c = b.chart();
    const Bundle der = b.derivations();
    if (!(x.bundle() == der) || !(y.bundle() == der)) throw DimensionError("bullet bracket arguments must be derivations");
    std::vector<Expr> out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = bullet_commutator(b, x, y, c.coordinate(i));
    const Section result(der, std::move(out));

    Expr f = 1, g = 1;
    for (std::size_t i = 0; i < b.size(); ++i) {
        f = f * (c.coordinate(i) + Expr(static_cast<long>(i + 1)));
        g = g + c.coordinate(i) * c.coordinate(i) * Expr(static_cast<long>(i + 2));
    }
    const Expr lhs = bullet_commutator(b, x, y, f * g);
    const Expr rhs = apply_vector_field(result.coeffs(), c, f * g);
    if (!(lhs == rhs)) throw std::logic_error("bullet commutator is not a first-order derivation on f*g");
    return result;
}

/// Jacobi residuals on basis triples and random polynomial derivations.
/// Verdicts only; no instance is assumed to pass.
inline AxiomReport check_bullet_jacobi(const BulletInstance& b, const CheckOptions& opt = {}) {
    const Bundle der = b.derivations();
    auto jac = [&](const Section& x, const Section& y, const Section& z) {
        return bullet_bracket(b, x, bullet_bracket(b, y, z)) + bullet_bracket(b, z, bullet_bracket(b, x, y)) +
               bullet_bracket(b, y, bullet_bracket(b, z, x));
    };
    AxiomCheck check{"jacobi", true, {}};
    const std::size_t m = b.size();
    for (std::size_t i = 0; i < m && check.pass; ++i)
        for (std::size_t j = i + 1; j < m && check.pass; ++j)
            for (std::size_t k = j + 1; k < m && check.pass; ++k) {
                const Section res = jac(Section::frame_element(der, i), Section::frame_element(der, j),
                                        Section::frame_element(der, k));
                if (!res.is_zero())
                    check = {"jacobi", false, "(" + der.frame()[i] + ", " + der.frame()[j] + ", " + der.frame()[k] +
                                                  "): residual " + res.to_string()};
            }
    Sampler s(opt.seed);
    auto random_derivation = [&] {
        std::vector<Expr> c(m);
        for (auto& e : c) e = s.polynomial_expr(b.chart().coords(), opt.degree, 3);
        return Section(der, std::move(c));
    };
    for (std::size_t k = 0; k < opt.samples && check.pass; ++k) {
        const Section x = random_derivation(), y = random_derivation(), z = random_derivation();
        const Section res = jac(x, y, z);
        if (!res.is_zero())
            check = {"jacobi", false,
                     "random sample " + std::to_string(k) + " X = (" + x.to_string() + "), Y = (" + y.to_string() +
                         "), Z = (" + z.to_string() + "): residual " + res.to_string()};
    }
    AxiomReport report;
    report.add(check);
    return report;
}

} // namespace galg
