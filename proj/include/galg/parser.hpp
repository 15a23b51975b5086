#pragma once

// Recursive-descent parser for the expression grammar (see docs/grammar.md):
//
//   expr    := term { ("+" | "-") term }
//   term    := unary { ("*" | "/") unary }
//   unary   := ("+" | "-") unary | power
//   power   := primary [ "^" ["+" | "-"] integer ]
//   primary := integer | identifier | "(" expr ")"

#include <algorithm>
#include <cctype>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "galg/error.hpp"
#include "galg/expr.hpp"

namespace galg {

namespace detail {

class ExprParser {
public:
    ExprParser(std::string_view text, std::span<const std::string> vars) : text_(text), vars_(vars) {}

    Expr parse() {
        Expr e = expr();
        skip_space();
        if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (accept('+'))
                e += term();
            else if (accept('-'))
                e -= term();
            else
                return e;
        }
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            if (accept('*')) {
                e *= unary();
            } else if (accept('/')) {
                skip_space();
                const std::size_t at = pos_;
                Expr d = unary();
                if (d.is_zero()) {
                    pos_ = at;
                    fail(d.is_constant() ? "zero denominator" : "denominator is identically zero");
                }
                e /= d;
            } else {
                return e;
            }
        }
    }

    Expr unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (!accept('^')) return base;
        skip_space();
        bool negative = false;
        if (accept('-'))
            negative = true;
        else
            accept('+');
        skip_space();
        const std::size_t at = pos_;
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("exponent must be an integer literal");
        long k = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            k = k * 10 + (text_[pos_++] - '0');
            if (k > 10000) {
                pos_ = at;
                fail("exponent too large");
            }
        }
        if (negative && base.is_zero()) {
            pos_ = at;
            fail("zero raised to a negative power");
        }
        return base.pow(negative ? -k : k);
    }

    Expr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            return Expr(Rational(Integer(std::string(text_.substr(start, pos_ - start)))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            if (std::find(vars_.begin(), vars_.end(), name) == vars_.end()) {
                pos_ = start;
                fail("unknown variable '" + name + "'");
            }
            return Expr::variable(std::move(name));
        }
        fail(std::string("unexpected '") + c + "'");
    }

    std::string_view text_;
    std::span<const std::string> vars_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses `text` over the declared variables `vars`.
inline Expr parse(std::string_view text, std::span<const std::string> vars) {
    return detail::ExprParser(text, vars).parse();
}

inline Expr parse(std::string_view text, std::initializer_list<std::string> vars) {
    std::vector<std::string> v(vars);
    return parse(text, std::span<const std::string>(v));
}

} // namespace galg
