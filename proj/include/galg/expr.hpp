#pragma once

// Exact rational functions p/q over Q in named variables.
//
// Canonical form: gcd(p, q) = 1 and q has leading coefficient 1 in the
// lexicographic term order of polynomial.hpp.  Under that normalization two
// Exprs are equal as rational functions iff their numerators and
// denominators are identical term lists, so operator== is exact equality.

#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "galg/error.hpp"
#include "galg/polynomial.hpp"

namespace galg {

class Expr {
public:
    Expr() = default;
    Expr(long c) : num_(c) {}                  // NOLINT(google-explicit-constructor)
    Expr(int c) : num_(static_cast<long>(c)) {} // NOLINT(google-explicit-constructor)
    Expr(const Rational& c) : num_(c) {}       // NOLINT(google-explicit-constructor)
    Expr(Polynomial p) : num_(std::move(p)) {} // NOLINT(google-explicit-constructor)

    static Expr variable(std::string name) { return Expr(Polynomial::variable(std::move(name))); }

    /// num / den in canonical form. Throws DomainError when den is zero.
    static Expr fraction(Polynomial num, Polynomial den) {
        if (den.is_zero()) throw DomainError("division by an identically zero function");
        Expr e;
        if (num.is_zero()) return e;
        if (den.is_constant()) {
            e.num_ = num.scaled(1 / den.leading_coefficient());
            return e;
        }
        const Polynomial g = gcd(num, den);
        if (!g.is_one()) {
            num = divide_exact(num, g);
            den = divide_exact(den, g);
        }
        const Rational lc = den.leading_coefficient();
        e.num_ = num.scaled(1 / lc);
        e.den_ = den.scaled(1 / lc);
        return e;
    }

    const Polynomial& numerator() const noexcept { return num_; }
    const Polynomial& denominator() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_polynomial() const noexcept { return den_.is_one(); }
    bool is_constant() const noexcept { return den_.is_one() && num_.is_constant(); }

    /// Requires is_constant().
    Rational constant_value() const { return num_.constant_value(); }

    std::set<std::string> variables() const {
        std::set<std::string> vs = num_.variables();
        for (const auto& v : den_.variables()) vs.insert(v);
        return vs;
    }

    Expr operator-() const {
        Expr e = *this;
        e.num_ = -e.num_;
        return e;
    }

    friend Expr operator+(const Expr& a, const Expr& b) { return add(a, b, false); }
    friend Expr operator-(const Expr& a, const Expr& b) { return add(a, b, true); }

    friend Expr operator*(const Expr& a, const Expr& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.is_polynomial() && b.is_polynomial()) return Expr(a.num_ * b.num_);
        // Cross-cancel so the product is already reduced.
        const Polynomial g1 = gcd(a.num_, b.den_);
        const Polynomial g2 = gcd(b.num_, a.den_);
        Polynomial num = divide_exact(a.num_, g1) * divide_exact(b.num_, g2);
        Polynomial den = divide_exact(a.den_, g2) * divide_exact(b.den_, g1);
        Expr e;
        const Rational lc = den.leading_coefficient();
        e.num_ = num.scaled(1 / lc);
        e.den_ = den.scaled(1 / lc);
        return e;
    }

    friend Expr operator/(const Expr& a, const Expr& b) {
        if (b.is_zero()) throw DomainError("division by an identically zero function");
        return a * b.reciprocal();
    }

    Expr reciprocal() const {
        if (is_zero()) throw DomainError("reciprocal of an identically zero function");
        Expr e;
        const Rational lc = num_.leading_coefficient();
        e.num_ = den_.scaled(1 / lc);
        e.den_ = num_.scaled(1 / lc);
        return e;
    }

    Expr& operator+=(const Expr& b) { return *this = *this + b; }
    Expr& operator-=(const Expr& b) { return *this = *this - b; }
    Expr& operator*=(const Expr& b) { return *this = *this * b; }
    Expr& operator/=(const Expr& b) { return *this = *this / b; }

    Expr pow(long k) const {
        if (k < 0) return reciprocal().pow(-k);
        Expr e;
        e.num_ = num_.pow(static_cast<unsigned>(k));
        e.den_ = den_.pow(static_cast<unsigned>(k));
        return e;
    }

    friend bool operator==(const Expr& a, const Expr& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    /// Canonical text, re-parseable by parse().
    std::string to_string() const {
        if (is_polynomial()) return num_.to_string();
        std::string n = num_.to_string();
        if (num_.terms().size() > 1) n = "(" + n + ")";
        std::string d = den_.to_string();
        const bool bare = den_.terms().size() == 1 && den_.leading_term().monomial.powers().size() == 1;
        if (!bare) d = "(" + d + ")";
        return n + "/" + d;
    }

    friend std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.to_string(); }

private:
    static Expr add(const Expr& a, const Expr& b, bool subtract) {
        if (a.is_polynomial() && b.is_polynomial()) return Expr(subtract ? a.num_ - b.num_ : a.num_ + b.num_);
        if (a.den_ == b.den_) {
            Polynomial num = subtract ? a.num_ - b.num_ : a.num_ + b.num_;
            return fraction(std::move(num), a.den_);
        }
        const Polynomial g = gcd(a.den_, b.den_);
        const Polynomial ca = divide_exact(b.den_, g); // multiplier for a
        const Polynomial cb = divide_exact(a.den_, g); // multiplier for b
        Polynomial num = subtract ? a.num_ * ca - b.num_ * cb : a.num_ * ca + b.num_ * cb;
        return fraction(std::move(num), a.den_ * ca);
    }

    Polynomial num_;
    Polynomial den_{1L};
};

inline std::string to_string(const Expr& e) { return e.to_string(); }

/// Decides a == b as rational functions by normalizing a - b.
inline bool equals(const Expr& a, const Expr& b) { return (a - b).is_zero(); }

using Point = std::map<std::string, Rational, std::less<>>;
using Substitution = std::map<std::string, Expr, std::less<>>;

inline Expr differentiate(const Expr& e, std::string_view v) {
    const Polynomial& p = e.numerator();
    const Polynomial& q = e.denominator();
    if (e.is_polynomial()) return Expr(p.derivative(v));
    return Expr::fraction(p.derivative(v) * q - p * q.derivative(v), q * q);
}

namespace detail {

inline Rational rational_pow(const Rational& base, unsigned e) {
    Rational r = 1, b = base;
    while (e > 0) {
        if (e & 1U) r *= b;
        e >>= 1U;
        if (e > 0) b *= b;
    }
    return r;
}

struct SubstitutedPolynomial {
    Polynomial numerator;
    Polynomial denominator;
};

// p(s) = N / prod_v den(s_v)^deg_v(p); evaluated without intermediate gcds.
inline SubstitutedPolynomial substitute_polynomial(const Polynomial& p, const Substitution& map) {
    std::map<std::string, unsigned, std::less<>> degrees;
    for (const auto& v : p.variables()) degrees[v] = p.degree_in(v);

    Polynomial common(1L);
    for (const auto& [v, d] : degrees) {
        auto it = map.find(v);
        if (it != map.end() && !it->second.is_polynomial()) common = common * it->second.denominator().pow(d);
    }

    std::map<std::pair<std::string, unsigned>, Polynomial> power_cache;
    auto power_of = [&](const Polynomial& base, const std::string& v, unsigned e) -> const Polynomial& {
        auto key = std::make_pair(v, e);
        auto it = power_cache.find(key);
        if (it == power_cache.end()) it = power_cache.emplace(key, base.pow(e)).first;
        return it->second;
    };

    Polynomial total;
    for (const auto& t : p.terms()) {
        Polynomial term = Polynomial(t.coefficient);
        for (const auto& [v, d] : degrees) {
            const unsigned e = t.monomial.degree_in(v);
            auto it = map.find(v);
            if (it == map.end()) {
                if (e > 0) term = term.times_monomial(Monomial::variable(v, e));
                continue;
            }
            const Expr& s = it->second;
            if (e > 0) term = term * power_of(s.numerator(), v + "#n", e);
            if (!s.is_polynomial() && d > e) term = term * power_of(s.denominator(), v + "#d", d - e);
        }
        total = total + term;
    }
    return {std::move(total), std::move(common)};
}

} // namespace detail

/// Simultaneous substitution of every mapped variable. Variables absent
/// from `map` are left in place. Throws DomainError if the substituted
/// denominator vanishes identically.
inline Expr substitute(const Expr& e, const Substitution& map) {
    if (map.empty() || e.is_constant()) return e;
    auto n = detail::substitute_polynomial(e.numerator(), map);
    if (e.is_polynomial()) return Expr::fraction(std::move(n.numerator), std::move(n.denominator));
    auto d = detail::substitute_polynomial(e.denominator(), map);
    if (d.numerator.is_zero())
        throw DomainError("substitution makes the denominator " + e.denominator().to_string() + " vanish identically");
    return Expr::fraction(n.numerator * d.denominator, n.denominator * d.numerator);
}

inline Rational evaluate(const Polynomial& p, const Point& point) {
    Rational total = 0;
    for (const auto& t : p.terms()) {
        Rational term = t.coefficient;
        for (const auto& [v, e] : t.monomial.powers()) {
            auto it = point.find(v);
            if (it == point.end()) throw DomainError("variable '" + v + "' is not assigned");
            term *= detail::rational_pow(it->second, e);
        }
        total += term;
    }
    return total;
}

/// Exact value at a point. Throws DomainError at a pole or when a variable
/// of `e` is unassigned.
inline Rational evaluate(const Expr& e, const Point& point) {
    const Rational d = evaluate(e.denominator(), point);
    if (d == 0) throw DomainError("evaluation at a pole of " + e.to_string());
    Rational r = evaluate(e.numerator(), point) / d;
    r.canonicalize();
    return r;
}

} // namespace galg
