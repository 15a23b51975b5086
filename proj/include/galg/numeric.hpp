#pragma once

// Double-precision evaluation of exact rational functions.  Coefficients are
// rounded once at compile time; variables are bound by position.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "galg/error.hpp"
#include "galg/expr.hpp"

namespace galg {

class CompiledPolynomial {
public:
    CompiledPolynomial() = default;
    CompiledPolynomial(const Polynomial& p, std::span<const std::string> order) {
        for (const auto& t : p.terms()) {
            Term term{t.coefficient.get_d(), {}};
            for (const auto& [name, e] : t.monomial.powers()) {
                const auto it = std::find(order.begin(), order.end(), name);
                if (it == order.end()) throw DomainError("variable '" + name + "' has no numeric slot");
                term.powers.push_back({static_cast<std::size_t>(it - order.begin()), e});
            }
            terms_.push_back(std::move(term));
        }
    }

    double operator()(std::span<const double> x) const {
        double s = 0;
        for (const auto& t : terms_) {
            double m = t.coefficient;
            for (const auto& [slot, e] : t.powers) {
                const double b = x[slot];
                for (unsigned k = 0; k < e; ++k) m *= b;
            }
            s += m;
        }
        return s;
    }

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_one() const noexcept { return terms_.size() == 1 && terms_[0].powers.empty() && terms_[0].coefficient == 1; }

private:
    struct Slot {
        std::size_t index;
        unsigned exponent;
    };
    struct Term {
        double coefficient;
        std::vector<Slot> powers;
    };
    std::vector<Term> terms_;
};

class CompiledExpr {
public:
    CompiledExpr() = default;
    CompiledExpr(const Expr& e, std::span<const std::string> order)
        : num_(e.numerator(), order), den_(e.denominator(), order), polynomial_(e.is_polynomial()) {}

    /// Throws DomainError at a pole or on a non-finite value.
    double operator()(std::span<const double> x) const {
        const double n = num_(x);
        if (polynomial_) {
            if (!std::isfinite(n)) throw DomainError("non-finite value");
            return n;
        }
        const double d = den_(x);
        if (d == 0 || !std::isfinite(d)) throw DomainError("pole: denominator vanishes");
        const double v = n / d;
        if (!std::isfinite(v)) throw DomainError("non-finite value");
        return v;
    }

    bool is_zero() const noexcept { return num_.is_zero(); }

private:
    CompiledPolynomial num_;
    CompiledPolynomial den_;
    bool polynomial_ = true;
};

/// Solves A x = b in place by Gaussian elimination with partial pivoting;
/// false when a pivot is below `tiny` relative to the largest entry.
inline bool solve_linear(std::vector<double>& a, std::vector<double>& b, std::size_t n, double tiny = 1e-14) {
    double scale = 0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    if (scale == 0) return false;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
        if (std::abs(a[piv * n + c]) <= tiny * scale) return false;
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
            std::swap(b[c], b[piv]);
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r * n + c] / a[c * n + c];
            if (f == 0) continue;
            for (std::size_t j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t c = n; c-- > 0;) {
        double s = b[c];
        for (std::size_t j = c + 1; j < n; ++j) s -= a[c * n + j] * b[j];
        b[c] = s / a[c * n + c];
    }
    return true;
}

} // namespace galg
