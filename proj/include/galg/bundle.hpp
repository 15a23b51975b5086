#pragma once

// Vector bundles trivialized over a single coordinate chart, their sections,
// and vector-bundle morphisms (phi, phi0) covering rational diffeomorphisms.
//
// A morphism stores its components phi^a_alpha as an r_source x r_target
// matrix whose row alpha lists the target-frame coefficients of the image
// of the source frame element t_alpha.  The entries are functions on the
// source base.  On sections it acts by
//
//     Gamma(phi, phi0)(z^alpha t_alpha) = ((z^alpha phi^a_alpha) o phi0^{-1}) s_a.

#include <algorithm>
#include <cstddef>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "galg/error.hpp"
#include "galg/expr.hpp"
#include "galg/matrix.hpp"

namespace galg {

class Chart {
public:
    Chart() = default;
    Chart(std::string name, std::vector<std::string> coords) : name_(std::move(name)), coords_(std::move(coords)) {
        if (coords_.empty()) throw InvariantError("chart '" + name_ + "' needs at least one coordinate");
        std::set<std::string> seen;
        for (const auto& c : coords_)
            if (!seen.insert(c).second) throw InvariantError("chart '" + name_ + "': duplicate coordinate '" + c + "'");
    }

    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& coords() const noexcept { return coords_; }
    std::size_t dimension() const noexcept { return coords_.size(); }
    const std::string& coord(std::size_t i) const { return coords_.at(i); }

    Expr coordinate(std::size_t i) const { return Expr::variable(coords_.at(i)); }

    friend bool operator==(const Chart& a, const Chart& b) { return a.name_ == b.name_ && a.coords_ == b.coords_; }

private:
    std::string name_;
    std::vector<std::string> coords_;
};

/// A rational diffeomorphism between charts, given by forward components
/// (functions of the source coordinates, one per target coordinate) and
/// inverse components (functions of the target coordinates).
class CoordMap {
public:
    CoordMap() = default;

    static CoordMap identity(const Chart& chart) {
        std::vector<Expr> id;
        for (std::size_t i = 0; i < chart.dimension(); ++i) id.push_back(chart.coordinate(i));
        CoordMap m;
        m.source_ = chart;
        m.target_ = chart;
        m.forward_ = id;
        m.inverse_ = std::move(id);
        m.identity_ = true;
        return m;
    }

    /// Validates both round trips symbolically.
    static CoordMap make(Chart source, Chart target, std::vector<Expr> forward, std::vector<Expr> inverse) {
        if (forward.size() != target.dimension())
            throw DimensionError("coordinate map needs " + std::to_string(target.dimension()) +
                                 " forward components, got " + std::to_string(forward.size()));
        if (inverse.size() != source.dimension())
            throw DimensionError("coordinate map needs " + std::to_string(source.dimension()) +
                                 " inverse components, got " + std::to_string(inverse.size()));
        check_components(forward, source, "forward");
        check_components(inverse, target, "inverse");

        CoordMap m;
        m.source_ = std::move(source);
        m.target_ = std::move(target);
        m.forward_ = std::move(forward);
        m.inverse_ = std::move(inverse);

        for (std::size_t i = 0; i < m.target_.dimension(); ++i) {
            Expr back = m.pushforward(m.forward_[i]);
            if (!(back == m.target_.coordinate(i)))
                throw NotDiffeomorphismError("not a diffeomorphism as presented: forward o inverse gives " +
                                             back.to_string() + " for " + m.target_.coord(i));
        }
        for (std::size_t k = 0; k < m.source_.dimension(); ++k) {
            Expr back = m.pullback(m.inverse_[k]);
            if (!(back == m.source_.coordinate(k)))
                throw NotDiffeomorphismError("not a diffeomorphism as presented: inverse o forward gives " +
                                             back.to_string() + " for " + m.source_.coord(k));
        }
        m.identity_ = m.source_ == m.target_ && m.is_identity_components();
        return m;
    }

    const Chart& source() const noexcept { return source_; }
    const Chart& target() const noexcept { return target_; }
    const std::vector<Expr>& forward() const noexcept { return forward_; }
    const std::vector<Expr>& inverse_components() const noexcept { return inverse_; }
    bool is_identity() const noexcept { return identity_; }

    CoordMap inverse() const {
        CoordMap m;
        m.source_ = target_;
        m.target_ = source_;
        m.forward_ = inverse_;
        m.inverse_ = forward_;
        m.identity_ = identity_;
        return m;
    }

    /// f o phi for f on the target chart.
    Expr pullback(const Expr& f) const {
        if (identity_) return f;
        return substitute(f, forward_map());
    }

    /// f o phi^{-1} for f on the source chart.
    Expr pushforward(const Expr& f) const {
        if (identity_) return f;
        return substitute(f, inverse_map());
    }

    /// J(i, j) = d forward_i / d source_j, a function on the source chart.
    FMatrix jacobian() const {
        FMatrix j(target_.dimension(), source_.dimension());
        for (std::size_t a = 0; a < target_.dimension(); ++a)
            for (std::size_t b = 0; b < source_.dimension(); ++b) j(a, b) = differentiate(forward_[a], source_.coord(b));
        return j;
    }

    Substitution forward_map() const {
        Substitution s;
        for (std::size_t i = 0; i < target_.dimension(); ++i) s.emplace(target_.coord(i), forward_[i]);
        return s;
    }

    Substitution inverse_map() const {
        Substitution s;
        for (std::size_t k = 0; k < source_.dimension(); ++k) s.emplace(source_.coord(k), inverse_[k]);
        return s;
    }

    friend bool operator==(const CoordMap& a, const CoordMap& b) {
        return a.source_ == b.source_ && a.target_ == b.target_ && a.forward_ == b.forward_ && a.inverse_ == b.inverse_;
    }

private:
    static void check_components(const std::vector<Expr>& comps, const Chart& chart, const char* which) {
        for (const auto& e : comps)
            for (const auto& v : e.variables())
                if (std::find(chart.coords().begin(), chart.coords().end(), v) == chart.coords().end())
                    throw InvariantError(std::string(which) + " component " + e.to_string() + " uses '" + v +
                                         "', not a coordinate of chart '" + chart.name() + "'");
    }

    bool is_identity_components() const {
        for (std::size_t i = 0; i < forward_.size(); ++i)
            if (!(forward_[i] == target_.coordinate(i))) return false;
        return true;
    }

    Chart source_;
    Chart target_;
    std::vector<Expr> forward_;
    std::vector<Expr> inverse_;
    bool identity_ = false;
};

/// outer o inner.
inline CoordMap compose(const CoordMap& outer, const CoordMap& inner) {
    if (!(inner.target() == outer.source()))
        throw DimensionError("cannot compose coordinate maps: chart '" + inner.target().name() + "' vs '" +
                             outer.source().name() + "'");
    if (outer.is_identity()) return inner;
    if (inner.is_identity()) return outer;
    std::vector<Expr> fwd, inv;
    for (const auto& f : outer.forward()) fwd.push_back(inner.pullback(f));
    for (const auto& g : inner.inverse_components()) inv.push_back(outer.pushforward(g));
    return CoordMap::make(inner.source(), outer.target(), std::move(fwd), std::move(inv));
}

inline CoordMap make_coord_map(Chart source, Chart target, std::vector<Expr> forward, std::vector<Expr> inverse) {
    return CoordMap::make(std::move(source), std::move(target), std::move(forward), std::move(inverse));
}

/// f o phi0, a function on phi0's source chart.
inline Expr pullback(const Expr& f, const CoordMap& phi0) { return phi0.pullback(f); }

class Bundle {
public:
    Bundle() = default;
    Bundle(Chart base, std::vector<std::string> frame) : base_(std::move(base)), frame_(std::move(frame)) {
        if (frame_.empty()) throw InvariantError("bundle over '" + base_.name() + "' needs rank >= 1");
        std::set<std::string> seen;
        for (const auto& f : frame_)
            if (!seen.insert(f).second) throw InvariantError("duplicate frame name '" + f + "'");
    }

    /// Coordinate frame d/dx^i.
    static Bundle tangent(const Chart& base) {
        std::vector<std::string> frame;
        for (const auto& c : base.coords()) frame.push_back("d/d" + c);
        return Bundle(base, std::move(frame));
    }

    const Chart& base() const noexcept { return base_; }
    const std::vector<std::string>& frame() const noexcept { return frame_; }
    std::size_t rank() const noexcept { return frame_.size(); }

    friend bool operator==(const Bundle& a, const Bundle& b) { return a.base_ == b.base_ && a.frame_ == b.frame_; }

private:
    Chart base_;
    std::vector<std::string> frame_;
};

class Section {
public:
    Section() = default;
    Section(Bundle bundle, std::vector<Expr> coeffs) : bundle_(std::move(bundle)), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != bundle_.rank())
            throw DimensionError("section needs " + std::to_string(bundle_.rank()) + " coefficients, got " +
                                 std::to_string(coeffs_.size()));
    }

    static Section zero(const Bundle& b) { return Section(b, std::vector<Expr>(b.rank())); }

    /// The frame element t_alpha (0-based).
    static Section frame_element(const Bundle& b, std::size_t alpha) {
        std::vector<Expr> c(b.rank());
        c.at(alpha) = 1;
        return Section(b, std::move(c));
    }

    const Bundle& bundle() const noexcept { return bundle_; }
    const std::vector<Expr>& coeffs() const noexcept { return coeffs_; }
    const Expr& operator[](std::size_t alpha) const { return coeffs_.at(alpha); }
    std::size_t size() const noexcept { return coeffs_.size(); }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!c.is_zero()) return false;
        return true;
    }

    friend Section operator+(const Section& a, const Section& b) {
        require_same_bundle(a, b);
        Section s = a;
        for (std::size_t k = 0; k < s.coeffs_.size(); ++k) s.coeffs_[k] += b.coeffs_[k];
        return s;
    }

    friend Section operator-(const Section& a, const Section& b) {
        require_same_bundle(a, b);
        Section s = a;
        for (std::size_t k = 0; k < s.coeffs_.size(); ++k) s.coeffs_[k] -= b.coeffs_[k];
        return s;
    }

    Section operator-() const {
        Section s = *this;
        for (auto& c : s.coeffs_) c = -c;
        return s;
    }

    friend Section operator*(const Expr& f, const Section& z) {
        Section s = z;
        for (auto& c : s.coeffs_) c = f * c;
        return s;
    }

    friend bool operator==(const Section& a, const Section& b) { return a.bundle_ == b.bundle_ && a.coeffs_ == b.coeffs_; }

    /// "x1*t1 - t2", "(x1 + 1)*t1"; "0" for the zero section.
    std::string to_string() const {
        std::string s;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            const Expr& c = coeffs_[k];
            if (c.is_zero()) continue;
            std::string term;
            if (c == Expr(1))
                term = bundle_.frame()[k];
            else if (c == Expr(-1))
                term = "-" + bundle_.frame()[k];
            else {
                const std::string cs = c.to_string();
                const bool bare = cs.find_first_of(" /") == std::string::npos;
                term = (bare ? cs : "(" + cs + ")") + "*" + bundle_.frame()[k];
            }
            if (!s.empty()) s += term[0] == '-' ? " - " + term.substr(1) : " + " + term;
            else s = term;
        }
        return s.empty() ? "0" : s;
    }

private:
    static void require_same_bundle(const Section& a, const Section& b) {
        if (!(a.bundle_ == b.bundle_)) throw DimensionError("sections belong to different bundles");
    }

    Bundle bundle_;
    std::vector<Expr> coeffs_;
};

class VBMorphism {
public:
    VBMorphism() = default;
    VBMorphism(Bundle source, Bundle target, CoordMap base, FMatrix components)
        : source_(std::move(source)), target_(std::move(target)), base_(std::move(base)),
          components_(std::move(components)) {
        if (!(base_.source() == source_.base()) || !(base_.target() == target_.base()))
            throw DimensionError("base map charts do not match the bundles' base charts");
        if (components_.rows() != source_.rank() || components_.cols() != target_.rank())
            throw DimensionError("morphism components must be " + std::to_string(source_.rank()) + "x" +
                                 std::to_string(target_.rank()) + ", got " + components_.shape());
        const auto& coords = source_.base().coords();
        for (std::size_t i = 0; i < components_.rows(); ++i)
            for (std::size_t j = 0; j < components_.cols(); ++j)
                for (const auto& v : components_(i, j).variables())
                    if (std::find(coords.begin(), coords.end(), v) == coords.end())
                        throw InvariantError("morphism entry " + components_(i, j).to_string() + " uses '" + v +
                                             "', not a coordinate of the source base");
    }

    static VBMorphism identity(const Bundle& b) {
        return VBMorphism(b, b, CoordMap::identity(b.base()), FMatrix::identity(b.rank()));
    }

    const Bundle& source() const noexcept { return source_; }
    const Bundle& target() const noexcept { return target_; }
    const CoordMap& base_map() const noexcept { return base_; }
    const FMatrix& components() const noexcept { return components_; }

    friend bool operator==(const VBMorphism& a, const VBMorphism& b) {
        return a.source_ == b.source_ && a.target_ == b.target_ && a.base_ == b.base_ && a.components_ == b.components_;
    }

private:
    Bundle source_;
    Bundle target_;
    CoordMap base_;
    FMatrix components_;
};

/// w^a = (sum_alpha z^alpha phi^a_alpha) o phi0^{-1}.
inline Section apply_morphism(const VBMorphism& m, const Section& z) {
    if (!(z.bundle() == m.source())) throw DimensionError("section does not belong to the morphism's source bundle");
    std::vector<Expr> w(m.target().rank());
    for (std::size_t a = 0; a < w.size(); ++a) {
        Expr s;
        for (std::size_t alpha = 0; alpha < z.size(); ++alpha)
            if (!z[alpha].is_zero()) s += z[alpha] * m.components()(alpha, a);
        w[a] = m.base_map().pushforward(s);
    }
    return Section(m.target(), std::move(w));
}

/// (outer, psi0) o (inner, phi0): components Phi_inner * (Phi_outer o phi0)
/// over the base map psi0 o phi0.
inline VBMorphism compose(const VBMorphism& outer, const VBMorphism& inner) {
    if (!(inner.target() == outer.source()))
        throw DimensionError("cannot compose morphisms: inner target bundle differs from outer source bundle");
    const FMatrix pulled = outer.components().map([&](const Expr& e) { return inner.base_map().pullback(e); });
    return VBMorphism(inner.source(), outer.target(), compose(outer.base_map(), inner.base_map()),
                      inner.components() * pulled);
}

/// Coefficients X^i of a vector field X = X^i d/dx^i applied to f.
inline Expr apply_vector_field(const std::vector<Expr>& x, const Chart& chart, const Expr& f) {
    if (x.size() != chart.dimension()) throw DimensionError("vector field has wrong number of components");
    Expr s;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!x[i].is_zero()) s += x[i] * differentiate(f, chart.coord(i));
    return s;
}

/// [X, Y]^i = X(Y^i) - Y(X^i).
inline std::vector<Expr> lie_bracket(const std::vector<Expr>& x, const std::vector<Expr>& y, const Chart& chart) {
    std::vector<Expr> out(chart.dimension());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = apply_vector_field(x, chart, y.at(i)) - apply_vector_field(y, chart, x.at(i));
    return out;
}

} // namespace galg
