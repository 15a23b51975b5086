#pragma once

// Generalized Lie algebroids ((F, nu, N), [,]_{F,h}, (rho, eta)) in a frame.
//
// The bracket is determined by structure functions C^gamma_{alpha beta}
// (with [t_alpha, t_beta] = C^gamma_{alpha beta} t_gamma) and the anchor
// derivation
//
//     a(u)(f) = u^alpha rho^i_alpha (d(f o h)/dx^i) o h^{-1},
//
// extended to arbitrary sections by the Leibniz rule
//
//     [u, v]^gamma = u^alpha v^beta C^gamma_{alpha beta} + a(u)(v^gamma) - a(v)(u^gamma).
//
// Antisymmetry and Leibniz then hold by construction; Jacobi and the
// anchor being a bracket morphism are genuine conditions on (rho, C, h)
// and are what check_axioms() decides.  Because the bracket is biadditive
// and obeys Leibniz in each slot, exact checks on frame triples together
// with coordinate and polynomial test functions cover all sections; the
// randomized section checks are a second, independent net.

#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "galg/bundle.hpp"
#include "galg/error.hpp"
#include "galg/expr.hpp"
#include "galg/matrix.hpp"
#include "galg/sampling.hpp"

namespace galg {

/// C^gamma_{alpha beta}, antisymmetric in the lower indices. Indices are 0-based.
class StructureFunctions {
public:
    StructureFunctions() = default;
    explicit StructureFunctions(std::size_t rank) : rank_(rank), data_(rank * rank * rank) {}

    /// Full tensor in (gamma, alpha, beta) row-major order; rejects
    /// non-antisymmetric data.
    static StructureFunctions from_tensor(std::size_t rank, std::vector<Expr> data) {
        if (data.size() != rank * rank * rank) throw DimensionError("structure tensor has wrong size");
        StructureFunctions c(rank);
        c.data_ = std::move(data);
        c.require_antisymmetric();
        return c;
    }

    /// Sets C^gamma_{alpha beta} = e and C^gamma_{beta alpha} = -e.
    StructureFunctions& set(std::size_t gamma, std::size_t alpha, std::size_t beta, const Expr& e) {
        check_index(gamma, alpha, beta);
        if (alpha == beta && !e.is_zero())
            throw InvariantError("structure function C^" + std::to_string(gamma + 1) + "_" + std::to_string(alpha + 1) +
                                 std::to_string(beta + 1) + " must vanish");
        data_[index(gamma, alpha, beta)] = e;
        data_[index(gamma, beta, alpha)] = -e;
        return *this;
    }

    const Expr& operator()(std::size_t gamma, std::size_t alpha, std::size_t beta) const {
        check_index(gamma, alpha, beta);
        return data_[index(gamma, alpha, beta)];
    }

    std::size_t rank() const noexcept { return rank_; }

    void require_antisymmetric() const {
        for (std::size_t g = 0; g < rank_; ++g)
            for (std::size_t a = 0; a < rank_; ++a)
                for (std::size_t b = a; b < rank_; ++b)
                    if (!(data_[index(g, a, b)] == -data_[index(g, b, a)]))
                        throw InvariantError("structure functions not antisymmetric: C^" + std::to_string(g + 1) +
                                             "_" + std::to_string(a + 1) + std::to_string(b + 1) + " = " +
                                             data_[index(g, a, b)].to_string() + " but C^" + std::to_string(g + 1) +
                                             "_" + std::to_string(b + 1) + std::to_string(a + 1) + " = " +
                                             data_[index(g, b, a)].to_string());
    }

    friend bool operator==(const StructureFunctions& x, const StructureFunctions& y) {
        return x.rank_ == y.rank_ && x.data_ == y.data_;
    }

private:
    std::size_t index(std::size_t g, std::size_t a, std::size_t b) const noexcept { return (g * rank_ + a) * rank_ + b; }

    void check_index(std::size_t g, std::size_t a, std::size_t b) const {
        if (g >= rank_ || a >= rank_ || b >= rank_) throw DimensionError("structure function index out of range");
    }

    std::size_t rank_ = 0;
    std::vector<Expr> data_;
};

class AlgebroidModel {
public:
    AlgebroidModel() = default;

    /// `anchor` is rank x dim(N): row alpha holds rho^i_alpha, functions on N.
    AlgebroidModel(Bundle bundle, FMatrix anchor, StructureFunctions structure, CoordMap h, CoordMap eta)
        : bundle_(std::move(bundle)), anchor_(std::move(anchor)), structure_(std::move(structure)), h_(std::move(h)),
          eta_(std::move(eta)) {
        const Chart& n = bundle_.base();
        if (anchor_.rows() != bundle_.rank() || anchor_.cols() != n.dimension())
            throw DimensionError("anchor must be " + std::to_string(bundle_.rank()) + "x" +
                                 std::to_string(n.dimension()) + ", got " + anchor_.shape());
        if (structure_.rank() != bundle_.rank())
            throw DimensionError("structure functions have rank " + std::to_string(structure_.rank()) +
                                 ", bundle has rank " + std::to_string(bundle_.rank()));
        structure_.require_antisymmetric();
        if (!(h_.source() == n) || !(h_.target() == n)) throw DimensionError("base map h must act on the base chart");
        if (!(eta_.source() == n) || !(eta_.target() == n))
            throw DimensionError("base map eta must act on the base chart");
    }

    static AlgebroidModel classical(Bundle bundle, FMatrix anchor, StructureFunctions structure) {
        const Chart base = bundle.base();
        return AlgebroidModel(std::move(bundle), std::move(anchor), std::move(structure), CoordMap::identity(base),
                              CoordMap::identity(base));
    }

    const Bundle& bundle() const noexcept { return bundle_; }
    const Chart& base() const noexcept { return bundle_.base(); }
    std::size_t rank() const noexcept { return bundle_.rank(); }
    std::size_t dimension() const noexcept { return bundle_.base().dimension(); }
    const FMatrix& anchor() const noexcept { return anchor_; }
    const StructureFunctions& structure() const noexcept { return structure_; }
    const CoordMap& h() const noexcept { return h_; }
    const CoordMap& eta() const noexcept { return eta_; }
    bool is_classical() const noexcept { return h_.is_identity() && eta_.is_identity(); }

    Section frame_element(std::size_t alpha) const { return Section::frame_element(bundle_, alpha); }

private:
    Bundle bundle_;
    FMatrix anchor_;
    StructureFunctions structure_;
    CoordMap h_;
    CoordMap eta_;
};

namespace detail {

/// (d(f o h)/dx^i) o h^{-1} for each base coordinate.
inline std::vector<Expr> twisted_gradient(const AlgebroidModel& a, const Expr& f) {
    const Chart& n = a.base();
    const Expr fh = a.h().pullback(f);
    std::vector<Expr> g(n.dimension());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = a.h().pushforward(differentiate(fh, n.coord(i)));
    return g;
}

inline void require_section_of(const AlgebroidModel& a, const Section& u) {
    if (!(u.bundle() == a.bundle())) throw DimensionError("section does not belong to the algebroid's bundle");
}

} // namespace detail

/// a(u)(f) = u^alpha rho^i_alpha (d(f o h)/dx^i) o h^{-1}.
inline Expr anchor_derivation(const AlgebroidModel& a, const Section& u, const Expr& f) {
    detail::require_section_of(a, u);
    if (f.is_constant()) return {};
    const std::vector<Expr> grad = detail::twisted_gradient(a, f);
    Expr s;
    for (std::size_t alpha = 0; alpha < a.rank(); ++alpha) {
        if (u[alpha].is_zero()) continue;
        Expr row;
        for (std::size_t i = 0; i < a.dimension(); ++i)
            if (!grad[i].is_zero() && !a.anchor()(alpha, i).is_zero()) row += a.anchor()(alpha, i) * grad[i];
        s += u[alpha] * row;
    }
    return s;
}

/// (theta, Id_N): F -> TN with theta^j_alpha = rho^i_alpha (dh^j/dx^i) o h^{-1},
/// so that a(u)(f) = u^alpha theta^j_alpha df/dx^j.
inline VBMorphism induced_anchor(const AlgebroidModel& a) {
    const Chart& n = a.base();
    const FMatrix dh = a.h().jacobian().map([&](const Expr& e) { return a.h().pushforward(e); });
    // dh(j, i) = dh^j/dx^i, so theta = rho * dh^t.
    return VBMorphism(a.bundle(), Bundle::tangent(n), CoordMap::identity(n), a.anchor() * dh.transpose());
}

inline Section bracket(const AlgebroidModel& a, const Section& u, const Section& v) {
    detail::require_section_of(a, u);
    detail::require_section_of(a, v);
    const std::size_t r = a.rank();
    std::vector<Expr> w(r);
    for (std::size_t g = 0; g < r; ++g) {
        Expr s;
        for (std::size_t al = 0; al < r; ++al) {
            if (u[al].is_zero()) continue;
            for (std::size_t be = 0; be < r; ++be) {
                const Expr& c = a.structure()(g, al, be);
                if (!c.is_zero() && !v[be].is_zero()) s += u[al] * v[be] * c;
            }
        }
        s += anchor_derivation(a, u, v[g]);
        s -= anchor_derivation(a, v, u[g]);
        w[g] = std::move(s);
    }
    return Section(a.bundle(), std::move(w));
}

/// Structure functions of the frame under the vector-field bracket of the
/// induced anchor: solves theta(t_gamma) C^gamma_{alpha beta} =
/// [theta(t_alpha), theta(t_beta)] via the left pseudo-inverse of theta^t.
/// Throws InvariantError when a bracket leaves the span of the frame images.
inline StructureFunctions derive_structure_functions(const Bundle& bundle, const FMatrix& anchor, const CoordMap& h) {
    AlgebroidModel probe(bundle, anchor, StructureFunctions(bundle.rank()), h, CoordMap::identity(bundle.base()));
    const FMatrix theta = induced_anchor(probe).components();
    const FMatrix theta_t = theta.transpose();
    const FMatrix left = left_pseudo_inverse(theta_t);
    const std::size_t r = bundle.rank();
    const std::size_t n = bundle.base().dimension();
    StructureFunctions c(r);
    for (std::size_t al = 0; al < r; ++al)
        for (std::size_t be = al + 1; be < r; ++be) {
            const std::vector<Expr> w = lie_bracket(theta.row(al), theta.row(be), bundle.base());
            FMatrix rhs(n, 1);
            for (std::size_t i = 0; i < n; ++i) rhs(i, 0) = w[i];
            const FMatrix coeffs = left * rhs;
            if (!(theta_t * coeffs == rhs))
                throw InvariantError("frame is not closed under the bracket: [" + bundle.frame()[al] + ", " +
                                     bundle.frame()[be] + "] leaves the span of the anchor images");
            for (std::size_t g = 0; g < r; ++g) c.set(g, al, be, coeffs(g, 0));
        }
    return c;
}

inline StructureFunctions derive_structure_functions(const Bundle& bundle, const FMatrix& anchor) {
    return derive_structure_functions(bundle, anchor, CoordMap::identity(bundle.base()));
}

/// One named verdict with a witness string when it fails.
struct AxiomCheck {
    std::string name;
    bool pass = true;
    std::string witness;
};

class AxiomReport {
public:
    void add(AxiomCheck c) { checks_.push_back(std::move(c)); }

    const std::vector<AxiomCheck>& checks() const noexcept { return checks_; }

    bool all_pass() const noexcept {
        for (const auto& c : checks_)
            if (!c.pass) return false;
        return true;
    }

    const AxiomCheck& at(const std::string& name) const {
        for (const auto& c : checks_)
            if (c.name == name) return c;
        throw std::out_of_range("no check named '" + name + "'");
    }

private:
    std::vector<AxiomCheck> checks_;
};

struct CheckOptions {
    std::size_t samples = 20;
    std::uint64_t seed = 20240917;
    unsigned degree = 2;
};

namespace detail {

inline std::string frame_tuple(const Bundle& b, std::initializer_list<std::size_t> idx) {
    std::string s = "(";
    bool first = true;
    for (auto i : idx) {
        if (!first) s += ", ";
        s += b.frame()[i];
        first = false;
    }
    return s + ")";
}

inline Section jacobiator(const AlgebroidModel& a, const Section& u, const Section& v, const Section& w) {
    return bracket(a, u, bracket(a, v, w)) + bracket(a, w, bracket(a, u, v)) + bracket(a, v, bracket(a, w, u));
}

inline Section random_section(const AlgebroidModel& a, Sampler& s, unsigned degree) {
    std::vector<Expr> c(a.rank());
    for (auto& e : c) e = s.polynomial_expr(a.base().coords(), degree, 3);
    return Section(a.bundle(), std::move(c));
}

inline std::vector<Expr> test_functions(const AlgebroidModel& a, Sampler& s, std::size_t extra, unsigned degree) {
    std::vector<Expr> fs;
    for (std::size_t i = 0; i < a.dimension(); ++i) fs.push_back(a.base().coordinate(i));
    for (std::size_t k = 0; k < extra; ++k) fs.push_back(s.polynomial_expr(a.base().coords(), degree, 4));
    return fs;
}

/// a(u) o a(v) - a(v) o a(u) applied to f.
inline Expr anchor_commutator(const AlgebroidModel& a, const Section& u, const Section& v, const Expr& f) {
    return anchor_derivation(a, u, anchor_derivation(a, v, f)) - anchor_derivation(a, v, anchor_derivation(a, u, f));
}

} // namespace detail

/// Antisymmetry, Jacobi, Leibniz and anchor-morphism verdicts for a model.
inline AxiomReport check_axioms(const AlgebroidModel& a, const CheckOptions& opt = {}) {
    const std::size_t r = a.rank();
    const Bundle& b = a.bundle();
    Sampler sampler(opt.seed);
    AxiomReport report;

    AxiomCheck anti{"antisymmetry", true, {}};
    try {
        a.structure().require_antisymmetric();
    } catch (const InvariantError& e) {
        anti = {"antisymmetry", false, e.what()};
    }
    for (std::size_t k = 0; k < opt.samples && anti.pass; ++k) {
        const Section u = detail::random_section(a, sampler, opt.degree);
        const Section v = detail::random_section(a, sampler, opt.degree);
        const Section res = bracket(a, u, v) + bracket(a, v, u);
        if (!res.is_zero()) anti = {"antisymmetry", false, "random sample " + std::to_string(k) + ": [u,v]+[v,u] = " + res.to_string()};
    }
    report.add(anti);

    AxiomCheck jacobi{"jacobi", true, {}};
    for (std::size_t i = 0; i < r && jacobi.pass; ++i)
        for (std::size_t j = i + 1; j < r && jacobi.pass; ++j)
            for (std::size_t k = j + 1; k < r && jacobi.pass; ++k) {
                const Section res = detail::jacobiator(a, a.frame_element(i), a.frame_element(j), a.frame_element(k));
                if (!res.is_zero())
                    jacobi = {"jacobi", false, detail::frame_tuple(b, {i, j, k}) + ": residual " + res.to_string()};
            }
    for (std::size_t k = 0; k < opt.samples && jacobi.pass; ++k) {
        const Section u = detail::random_section(a, sampler, opt.degree);
        const Section v = detail::random_section(a, sampler, opt.degree);
        const Section w = detail::random_section(a, sampler, opt.degree);
        const Section res = detail::jacobiator(a, u, v, w);
        if (!res.is_zero())
            jacobi = {"jacobi", false, "random sample " + std::to_string(k) + ": residual " + res.to_string()};
    }
    report.add(jacobi);

    AxiomCheck leibniz{"leibniz", true, {}};
    const std::vector<Expr> fs = detail::test_functions(a, sampler, 3, opt.degree);
    for (std::size_t i = 0; i < r && leibniz.pass; ++i)
        for (std::size_t j = 0; j < r && leibniz.pass; ++j)
            for (const auto& f : fs) {
                const Section ti = a.frame_element(i), tj = a.frame_element(j);
                const Section res = bracket(a, ti, f * tj) - f * bracket(a, ti, tj) - anchor_derivation(a, ti, f) * tj;
                if (!res.is_zero()) {
                    leibniz = {"leibniz", false,
                               detail::frame_tuple(b, {i, j}) + ", f = " + f.to_string() + ": residual " + res.to_string()};
                    break;
                }
            }
    for (std::size_t k = 0; k < opt.samples && leibniz.pass; ++k) {
        const Section u = detail::random_section(a, sampler, opt.degree);
        const Section v = detail::random_section(a, sampler, opt.degree);
        const Expr f = sampler.polynomial_expr(a.base().coords(), opt.degree, 3);
        const Section res = bracket(a, u, f * v) - f * bracket(a, u, v) - anchor_derivation(a, u, f) * v;
        if (!res.is_zero())
            leibniz = {"leibniz", false, "random sample " + std::to_string(k) + ": residual " + res.to_string()};
    }
    report.add(leibniz);

    AxiomCheck morphism{"anchor-morphism", true, {}};
    for (std::size_t i = 0; i < r && morphism.pass; ++i)
        for (std::size_t j = i + 1; j < r && morphism.pass; ++j)
            for (const auto& f : fs) {
                const Section ti = a.frame_element(i), tj = a.frame_element(j);
                const Expr res = anchor_derivation(a, bracket(a, ti, tj), f) - detail::anchor_commutator(a, ti, tj, f);
                if (!res.is_zero()) {
                    morphism = {"anchor-morphism", false,
                                detail::frame_tuple(b, {i, j}) + ", f = " + f.to_string() + ": residual " + res.to_string()};
                    break;
                }
            }
    for (std::size_t k = 0; k < opt.samples && morphism.pass; ++k) {
        const Section u = detail::random_section(a, sampler, opt.degree);
        const Section v = detail::random_section(a, sampler, opt.degree);
        const Expr f = sampler.polynomial_expr(a.base().coords(), opt.degree, 3);
        const Expr res = anchor_derivation(a, bracket(a, u, v), f) - detail::anchor_commutator(a, u, v, f);
        if (!res.is_zero())
            morphism = {"anchor-morphism", false, "random sample " + std::to_string(k) + ": residual " + res.to_string()};
    }
    report.add(morphism);

    return report;
}

} // namespace galg
