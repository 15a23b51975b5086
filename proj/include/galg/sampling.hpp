#pragma once

// Seeded generators for randomized exact identity checks.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "galg/expr.hpp"

namespace galg {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    /// Polynomial with up to `max_terms` terms of total degree <= max_degree
    /// and integer coefficients in [-coef, coef].
    Polynomial polynomial(std::span<const std::string> vars, unsigned max_degree, std::size_t max_terms = 4,
                          long coef = 5) {
        std::vector<Polynomial::Term> terms;
        const std::size_t n = static_cast<std::size_t>(integer(1, static_cast<long>(max_terms)));
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<Monomial::Power> powers;
            long budget = integer(0, max_degree);
            for (const auto& v : vars) {
                if (budget <= 0) break;
                const long e = integer(0, budget);
                if (e > 0) powers.emplace_back(v, static_cast<unsigned>(e));
                budget -= e;
            }
            long c = integer(-coef, coef);
            if (c == 0) c = 1;
            terms.push_back({Monomial::from_powers(std::move(powers)), Rational(c)});
        }
        return Polynomial::from_terms(std::move(terms));
    }

    Expr polynomial_expr(std::span<const std::string> vars, unsigned max_degree, std::size_t max_terms = 4) {
        return Expr(polynomial(vars, max_degree, max_terms));
    }

    /// Rational function whose denominator is a non-zero polynomial.
    Expr rational_expr(std::span<const std::string> vars, unsigned max_degree, std::size_t max_terms = 3) {
        Polynomial den;
        while (den.is_zero()) den = polynomial(vars, max_degree, max_terms);
        return Expr::fraction(polynomial(vars, max_degree, max_terms), den);
    }

    Rational rational(long range = 7) {
        long d = integer(1, range);
        Rational q(integer(-range * d, range * d), d);
        q.canonicalize();
        return q;
    }

    Point point(std::span<const std::string> vars, long range = 7) {
        Point p;
        for (const auto& v : vars) p[v] = rational(range);
        return p;
    }

    std::mt19937_64& engine() noexcept { return rng_; }

private:
    std::mt19937_64 rng_;
};

} // namespace galg
