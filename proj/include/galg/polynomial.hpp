#pragma once

// Sparse distributed multivariate polynomials over the rationals.
//
// Terms are kept sorted in decreasing lexicographic order, where variables
// are ranked by name (the alphabetically smallest name is the most
// significant).  Zero coefficients are never stored, so the empty term list
// is the zero polynomial and structural equality is mathematical equality.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "galg/error.hpp"

namespace galg {

using Rational = mpq_class;
using Integer = mpz_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }

class Monomial {
public:
    using Power = std::pair<std::string, unsigned>;

    Monomial() = default;

    static Monomial variable(std::string name, unsigned exponent = 1) {
        Monomial m;
        if (exponent > 0) m.powers_.emplace_back(std::move(name), exponent);
        return m;
    }

    /// `powers` need not be sorted; repeated names are merged.
    static Monomial from_powers(std::vector<Power> powers) {
        std::sort(powers.begin(), powers.end());
        Monomial m;
        for (auto& p : powers) {
            if (p.second == 0) continue;
            if (!m.powers_.empty() && m.powers_.back().first == p.first)
                m.powers_.back().second += p.second;
            else
                m.powers_.push_back(std::move(p));
        }
        return m;
    }

    const std::vector<Power>& powers() const noexcept { return powers_; }
    bool is_one() const noexcept { return powers_.empty(); }

    unsigned degree_in(std::string_view v) const noexcept {
        for (const auto& [name, e] : powers_)
            if (name == v) return e;
        return 0;
    }

    unsigned total_degree() const noexcept {
        unsigned d = 0;
        for (const auto& p : powers_) d += p.second;
        return d;
    }

    Monomial without(std::string_view v) const {
        Monomial m;
        for (const auto& p : powers_)
            if (p.first != v) m.powers_.push_back(p);
        return m;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial m;
        m.powers_.reserve(a.powers_.size() + b.powers_.size());
        std::size_t i = 0, j = 0;
        while (i < a.powers_.size() && j < b.powers_.size()) {
            const auto& pa = a.powers_[i];
            const auto& pb = b.powers_[j];
            if (pa.first == pb.first) {
                m.powers_.emplace_back(pa.first, pa.second + pb.second);
                ++i;
                ++j;
            } else if (pa.first < pb.first) {
                m.powers_.push_back(pa);
                ++i;
            } else {
                m.powers_.push_back(pb);
                ++j;
            }
        }
        for (; i < a.powers_.size(); ++i) m.powers_.push_back(a.powers_[i]);
        for (; j < b.powers_.size(); ++j) m.powers_.push_back(b.powers_[j]);
        return m;
    }

    /// True when b divides a.
    friend bool divides(const Monomial& b, const Monomial& a) {
        for (const auto& [name, e] : b.powers_)
            if (a.degree_in(name) < e) return false;
        return true;
    }

    /// Requires divides(b, a).
    friend Monomial quotient(const Monomial& a, const Monomial& b) {
        Monomial m;
        for (const auto& [name, e] : a.powers_) {
            const unsigned r = e - b.degree_in(name);
            if (r > 0) m.powers_.emplace_back(name, r);
        }
        return m;
    }

    friend Monomial gcd(const Monomial& a, const Monomial& b) {
        Monomial m;
        for (const auto& [name, e] : a.powers_) {
            const unsigned r = std::min(e, b.degree_in(name));
            if (r > 0) m.powers_.emplace_back(name, r);
        }
        return m;
    }

    /// Lexicographic comparison: 1 if a > b, -1 if a < b, 0 if equal.
    friend int compare(const Monomial& a, const Monomial& b) noexcept {
        std::size_t i = 0, j = 0;
        while (i < a.powers_.size() && j < b.powers_.size()) {
            const auto& pa = a.powers_[i];
            const auto& pb = b.powers_[j];
            if (pa.first == pb.first) {
                if (pa.second != pb.second) return pa.second > pb.second ? 1 : -1;
                ++i;
                ++j;
            } else {
                return pa.first < pb.first ? 1 : -1;
            }
        }
        if (i < a.powers_.size()) return 1;
        if (j < b.powers_.size()) return -1;
        return 0;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.powers_ == b.powers_; }

    std::string to_string() const {
        std::string s;
        for (const auto& [name, e] : powers_) {
            if (!s.empty()) s += '*';
            s += name;
            if (e != 1) s += '^' + std::to_string(e);
        }
        return s;
    }

private:
    std::vector<Power> powers_; // sorted by name, exponents > 0
};

class Polynomial {
public:
    struct Term {
        Monomial monomial;
        Rational coefficient;
    };

    Polynomial() = default;
    Polynomial(long c) { // NOLINT(google-explicit-constructor)
        if (c != 0) terms_.push_back({Monomial{}, Rational(c)});
    }
    Polynomial(const Rational& c) { // NOLINT(google-explicit-constructor)
        if (c != 0) terms_.push_back({Monomial{}, c});
    }

    static Polynomial monomial(Monomial m, Rational c = 1) {
        Polynomial p;
        if (c != 0) p.terms_.push_back({std::move(m), std::move(c)});
        return p;
    }

    static Polynomial variable(std::string name) { return monomial(Monomial::variable(std::move(name))); }

    /// Terms in any order; like monomials are combined.
    static Polynomial from_terms(std::vector<Term> terms) {
        Polynomial p;
        p.terms_ = std::move(terms);
        p.canonicalize();
        return p;
    }

    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one()); }
    bool is_one() const noexcept { return terms_.size() == 1 && terms_[0].monomial.is_one() && terms_[0].coefficient == 1; }

    Rational constant_value() const {
        if (terms_.empty() || !terms_.back().monomial.is_one()) return 0;
        return terms_.back().coefficient;
    }

    /// Requires a non-zero polynomial.
    const Term& leading_term() const { return terms_.front(); }
    const Rational& leading_coefficient() const { return terms_.front().coefficient; }

    std::set<std::string> variables() const {
        std::set<std::string> vs;
        for (const auto& t : terms_)
            for (const auto& p : t.monomial.powers()) vs.insert(p.first);
        return vs;
    }

    unsigned degree_in(std::string_view v) const noexcept {
        unsigned d = 0;
        for (const auto& t : terms_) d = std::max(d, t.monomial.degree_in(v));
        return d;
    }

    unsigned total_degree() const noexcept {
        unsigned d = 0;
        for (const auto& t : terms_) d = std::max(d, t.monomial.total_degree());
        return d;
    }

    /// Coefficient of v^k, as a polynomial free of v.
    Polynomial coefficient_in(std::string_view v, unsigned k) const {
        std::vector<Term> out;
        for (const auto& t : terms_)
            if (t.monomial.degree_in(v) == k) out.push_back({t.monomial.without(v), t.coefficient});
        return from_terms(std::move(out));
    }

    Polynomial operator-() const {
        Polynomial p = *this;
        for (auto& t : p.terms_) t.coefficient = -t.coefficient;
        return p;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge(a, b, false); }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge(a, b, true); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.is_constant()) return b.scaled(a.terms_[0].coefficient);
        if (b.is_constant()) return a.scaled(b.terms_[0].coefficient);
        std::vector<Term> out;
        out.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& ta : a.terms_)
            for (const auto& tb : b.terms_) out.push_back({ta.monomial * tb.monomial, ta.coefficient * tb.coefficient});
        return from_terms(std::move(out));
    }

    Polynomial scaled(const Rational& c) const {
        if (c == 0) return {};
        Polynomial p = *this;
        for (auto& t : p.terms_) t.coefficient *= c;
        return p;
    }

    Polynomial times_monomial(const Monomial& m) const {
        Polynomial p = *this;
        for (auto& t : p.terms_) t.monomial = t.monomial * m;
        return p; // order is preserved by multiplication with a monomial
    }

    Polynomial pow(unsigned k) const {
        Polynomial result(1L), base = *this;
        while (k > 0) {
            if (k & 1U) result = result * base;
            k >>= 1U;
            if (k > 0) base = base * base;
        }
        return result;
    }

    Polynomial derivative(std::string_view v) const {
        std::vector<Term> out;
        for (const auto& t : terms_) {
            const unsigned e = t.monomial.degree_in(v);
            if (e == 0) continue;
            std::vector<Monomial::Power> powers;
            for (const auto& p : t.monomial.powers())
                powers.emplace_back(p.first, p.first == v ? p.second - 1 : p.second);
            out.push_back({Monomial::from_powers(std::move(powers)), t.coefficient * e});
        }
        return from_terms(std::move(out));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (!(a.terms_[i].monomial == b.terms_[i].monomial) || a.terms_[i].coefficient != b.terms_[i].coefficient)
                return false;
        return true;
    }

    /// Scaled to leading coefficient 1 (zero stays zero).
    Polynomial monic() const {
        if (is_zero() || leading_coefficient() == 1) return *this;
        return scaled(1 / leading_coefficient());
    }

    /// Scaled to coprime integer coefficients with positive leading coefficient.
    Polynomial integer_primitive() const {
        if (is_zero()) return *this;
        Integer num_gcd = 0, den_lcm = 1;
        for (const auto& t : terms_) {
            num_gcd = ::gcd(num_gcd, Integer(t.coefficient.get_num()));
            den_lcm = ::lcm(den_lcm, Integer(t.coefficient.get_den()));
        }
        Rational s(den_lcm, num_gcd);
        s.canonicalize();
        if (leading_coefficient() < 0) s = -s;
        return scaled(s);
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& t : terms_) {
            Rational c = t.coefficient;
            if (first) {
                if (c < 0) {
                    os << '-';
                    c = -c;
                }
            } else {
                os << (c < 0 ? " - " : " + ");
                if (c < 0) c = -c;
            }
            first = false;
            if (t.monomial.is_one()) {
                os << c.get_str();
            } else {
                if (c != 1) os << c.get_str() << '*';
                os << t.monomial.to_string();
            }
        }
        return os.str();
    }

private:
    static Polynomial merge(const Polynomial& a, const Polynomial& b, bool subtract) {
        Polynomial p;
        p.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            int c;
            if (i == a.terms_.size())
                c = -1;
            else if (j == b.terms_.size())
                c = 1;
            else
                c = compare(a.terms_[i].monomial, b.terms_[j].monomial);
            if (c > 0) {
                p.terms_.push_back(a.terms_[i++]);
            } else if (c < 0) {
                Term t = b.terms_[j++];
                if (subtract) t.coefficient = -t.coefficient;
                p.terms_.push_back(std::move(t));
            } else {
                Rational s = subtract ? Rational(a.terms_[i].coefficient - b.terms_[j].coefficient)
                                      : Rational(a.terms_[i].coefficient + b.terms_[j].coefficient);
                if (s != 0) p.terms_.push_back({a.terms_[i].monomial, std::move(s)});
                ++i;
                ++j;
            }
        }
        return p;
    }

    void canonicalize() {
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term& x, const Term& y) { return compare(x.monomial, y.monomial) > 0; });
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!out.empty() && out.back().monomial == t.monomial)
                out.back().coefficient += t.coefficient;
            else
                out.push_back(std::move(t));
        }
        std::erase_if(out, [](const Term& t) { return t.coefficient == 0; });
        terms_ = std::move(out);
    }

    std::vector<Term> terms_;
};

/// Exact quotient a / b, or false when b does not divide a.
inline bool try_divide(const Polynomial& a, const Polynomial& b, Polynomial& quotient_out) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    if (b.is_constant()) {
        quotient_out = a.scaled(1 / b.leading_coefficient());
        return true;
    }
    std::vector<Polynomial::Term> q;
    Polynomial r = a;
    const auto& lb = b.leading_term();
    while (!r.is_zero()) {
        const auto& lr = r.leading_term();
        if (!divides(lb.monomial, lr.monomial)) return false;
        Polynomial::Term t{quotient(lr.monomial, lb.monomial), lr.coefficient / lb.coefficient};
        r = r - b.times_monomial(t.monomial).scaled(t.coefficient);
        q.push_back(std::move(t));
    }
    quotient_out = Polynomial::from_terms(std::move(q));
    return true;
}

/// Exact quotient; throws if b does not divide a.
inline Polynomial divide_exact(const Polynomial& a, const Polynomial& b) {
    Polynomial q;
    if (!try_divide(a, b, q)) throw DomainError("inexact polynomial division");
    return q;
}

namespace detail {

/// Pseudo-remainder of a by b with respect to v (deg_v b >= 1).
inline Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, const std::string& v) {
    const unsigned db = b.degree_in(v);
    const Polynomial lb = b.coefficient_in(v, db);
    Polynomial r = a;
    while (!r.is_zero()) {
        const unsigned dr = r.degree_in(v);
        if (dr < db) break;
        const Polynomial lr = r.coefficient_in(v, dr);
        r = lb * r - (lr * b).times_monomial(Monomial::variable(v, dr - db));
        r = r.integer_primitive();
    }
    return r;
}

} // namespace detail

inline Polynomial gcd(const Polynomial& a, const Polynomial& b);

namespace detail {
inline Polynomial prs_gcd(const Polynomial& a, const Polynomial& b);
}

namespace detail {

/// gcd of the coefficients of p viewed as a polynomial in v.
inline Polynomial content_in(const Polynomial& p, const std::string& v) {
    Polynomial c;
    const unsigned d = p.degree_in(v);
    for (unsigned k = 0; k <= d; ++k) {
        Polynomial ck = p.coefficient_in(v, k);
        if (ck.is_zero()) continue;
        c = gcd(c, ck);
        if (c.is_constant()) return Polynomial(1L);
    }
    return c;
}

inline Polynomial primitive_part_in(const Polynomial& p, const std::string& v) {
    return divide_exact(p, content_in(p, v)).integer_primitive();
}

} // namespace detail

namespace detail {

inline Integer max_norm(const Polynomial& p) {
    Integer m = 0;
    for (const auto& t : p.terms()) {
        Integer c = abs(t.coefficient.get_num());
        if (c > m) m = c;
    }
    return m;
}

inline Integer integer_content(const Polynomial& p) {
    Integer g = 0;
    for (const auto& t : p.terms()) g = ::gcd(g, Integer(t.coefficient.get_num()));
    return g;
}

/// p with v := xi, for integer-coefficient p.
inline Polynomial evaluate_at_integer(const Polynomial& p, const std::string& v, const Integer& xi) {
    std::vector<Polynomial::Term> out;
    out.reserve(p.terms().size());
    for (const auto& t : p.terms()) {
        Integer w;
        mpz_pow_ui(w.get_mpz_t(), xi.get_mpz_t(), t.monomial.degree_in(v));
        out.push_back({t.monomial.without(v), Rational(t.coefficient * w)});
    }
    return Polynomial::from_terms(std::move(out));
}

/// Rebuilds sum_k h_k v^k from the xi-adic digits (symmetric residues) of h.
inline Polynomial interpolate_xi_adic(Polynomial h, const std::string& v, const Integer& xi) {
    std::vector<Polynomial::Term> out;
    const Integer half = xi / 2;
    for (unsigned k = 0; !h.is_zero(); ++k) {
        if (k > 100000) return {};
        std::vector<Polynomial::Term> digit;
        for (const auto& t : h.terms()) {
            Integer r = t.coefficient.get_num() % xi; // sign follows the dividend
            if (r > half) r -= xi;
            else if (r < -half || (r == -half && xi % 2 == 0 && r != 0)) r += xi;
            if (r != 0) digit.push_back({t.monomial, Rational(r)});
        }
        Polynomial g = Polynomial::from_terms(digit);
        for (auto& t : digit) out.push_back({t.monomial * Monomial::variable(v, k), t.coefficient});
        h = (h - g).scaled(Rational(1) / Rational(xi));
    }
    return Polynomial::from_terms(std::move(out));
}

/// Heuristic gcd over Z (Char, Geddes and Gonnet) of integer-coefficient
/// polynomials, including the integer content. Fails with false when every
/// evaluation point produced a candidate that does not divide both inputs.
inline bool heuristic_gcd(const Polynomial& a, const Polynomial& b, Polynomial& out) {
    const Integer ca = integer_content(a), cb = integer_content(b);
    const Integer c = ::gcd(ca, cb);
    if (a.is_constant() || b.is_constant()) {
        out = Polynomial(Rational(c));
        return true;
    }
    const Polynomial pa = a.scaled(Rational(1) / Rational(ca));
    const Polynomial pb = b.scaled(Rational(1) / Rational(cb));

    std::set<std::string> vars = pa.variables();
    for (const auto& v : pb.variables()) vars.insert(v);
    const std::string v = *vars.begin();

    const Integer na = max_norm(pa), nb = max_norm(pb);
    // xi >= 2 min(|a|, |b|) + 2 makes any candidate that divides both inputs
    // the gcd, so only the division test below can reject it.
    Integer xi = 2 * std::min(na, nb) + 29;
    for (int attempt = 0; attempt < 6; ++attempt) {
        const Polynomial fa = evaluate_at_integer(pa, v, xi);
        const Polynomial fb = evaluate_at_integer(pb, v, xi);
        Polynomial h;
        if (!fa.is_zero() && !fb.is_zero() && heuristic_gcd(fa, fb, h)) {
            Polynomial cand = interpolate_xi_adic(h, v, xi);
            if (!cand.is_zero()) {
                cand = cand.integer_primitive();
                Polynomial q;
                if (try_divide(pa, cand, q) && try_divide(pb, cand, q)) {
                    out = cand.scaled(Rational(c));
                    return true;
                }
            }
        }
        xi = 73794 * xi * sqrt(sqrt(xi)) / 27011;
    }
    return false;
}

} // namespace detail

/// Greatest common divisor over Q, normalized to leading coefficient 1.
/// gcd(0, 0) = 0.
inline Polynomial gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Polynomial(1L);

    if (a.terms().size() == 1 || b.terms().size() == 1) {
        const Polynomial& mono = a.terms().size() == 1 ? a : b;
        const Polynomial& other = a.terms().size() == 1 ? b : a;
        Monomial g = mono.leading_term().monomial;
        for (const auto& t : other.terms()) {
            g = gcd(g, t.monomial);
            if (g.is_one()) break;
        }
        return Polynomial::monomial(g);
    }

    if (a.monic() == b.monic()) return a.monic();

    {
        Polynomial h;
        if (detail::heuristic_gcd(a.integer_primitive(), b.integer_primitive(), h)) return h.monic();
    }
    return detail::prs_gcd(a, b);
}

namespace detail {

inline Polynomial prs_gcd(const Polynomial& a, const Polynomial& b) {
    std::set<std::string> vars = a.variables();
    for (const auto& v : b.variables()) vars.insert(v);
    const std::string v = *vars.begin();

    if (a.degree_in(v) == 0) return gcd(a, detail::content_in(b, v));
    if (b.degree_in(v) == 0) return gcd(detail::content_in(a, v), b);

    const Polynomial ca = detail::content_in(a, v);
    const Polynomial cb = detail::content_in(b, v);
    const Polynomial c = gcd(ca, cb);

    Polynomial p = divide_exact(a, ca).integer_primitive();
    Polynomial q = divide_exact(b, cb).integer_primitive();
    if (p.degree_in(v) < q.degree_in(v)) std::swap(p, q);
    while (!q.is_zero() && q.degree_in(v) > 0) {
        Polynomial r = detail::pseudo_remainder(p, q, v);
        p = std::move(q);
        q = r.is_zero() ? Polynomial{} : detail::primitive_part_in(r, v);
    }
    Polynomial g = q.is_zero() ? detail::primitive_part_in(p, v) : Polynomial(1L);
    return (c * g).monic();
}

} // namespace detail

} // namespace galg
