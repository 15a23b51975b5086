#pragma once

// Matrices of rational functions: products, transposes, determinants,
// adjugate inverses and the left pseudo-inverse (R^t R)^{-1} R^t.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "galg/error.hpp"
#include "galg/expr.hpp"

namespace galg {

class FMatrix {
public:
    FMatrix() = default;
    FMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    FMatrix(std::initializer_list<std::initializer_list<Expr>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw DimensionError("ragged matrix literal");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static FMatrix from_rows(const std::vector<std::vector<Expr>>& rows) {
        FMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t i = 0; i < m.rows_; ++i) {
            if (rows[i].size() != m.cols_) throw DimensionError("ragged matrix: row " + std::to_string(i + 1));
            for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static FMatrix identity(std::size_t n) {
        FMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Expr& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Expr& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<Expr> row(std::size_t i) const {
        return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
    }

    std::vector<Expr> column(std::size_t j) const {
        std::vector<Expr> c;
        c.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
        return c;
    }

    FMatrix transpose() const {
        FMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    template <class F>
    FMatrix map(F&& f) const {
        FMatrix m(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = f(data_[k]);
        return m;
    }

    friend FMatrix operator+(const FMatrix& a, const FMatrix& b) {
        require_same_shape(a, b, "add");
        FMatrix m = a;
        for (std::size_t k = 0; k < m.data_.size(); ++k) m.data_[k] += b.data_[k];
        return m;
    }

    friend FMatrix operator-(const FMatrix& a, const FMatrix& b) {
        require_same_shape(a, b, "subtract");
        FMatrix m = a;
        for (std::size_t k = 0; k < m.data_.size(); ++k) m.data_[k] -= b.data_[k];
        return m;
    }

    FMatrix operator-() const {
        return map([](const Expr& e) { return -e; });
    }

    friend FMatrix operator*(const Expr& s, const FMatrix& a) {
        return a.map([&](const Expr& e) { return s * e; });
    }

    friend FMatrix operator*(const FMatrix& a, const FMatrix& b) {
        if (a.cols_ != b.rows_)
            throw DimensionError("matmul: " + a.shape() + " times " + b.shape());
        FMatrix m(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) {
                Expr s;
                for (std::size_t k = 0; k < a.cols_; ++k) {
                    const Expr& x = a(i, k);
                    const Expr& y = b(k, j);
                    if (!x.is_zero() && !y.is_zero()) s += x * y;
                }
                m(i, j) = std::move(s);
            }
        return m;
    }

    friend bool operator==(const FMatrix& a, const FMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    bool is_zero() const {
        for (const auto& e : data_)
            if (!e.is_zero()) return false;
        return true;
    }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

    /// "[a, b; c, d]"
    std::string to_string() const {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i) os << "; ";
            for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j);
        }
        os << ']';
        return os.str();
    }

private:
    static void require_same_shape(const FMatrix& a, const FMatrix& b, const char* op) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw DimensionError(std::string(op) + ": " + a.shape() + " vs " + b.shape());
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Expr> data_; // row-major
};

inline FMatrix matmul(const FMatrix& a, const FMatrix& b) { return a * b; }

inline FMatrix substitute(const FMatrix& m, const Substitution& map) {
    return m.map([&](const Expr& e) { return substitute(e, map); });
}

namespace detail {

inline FMatrix minor_of(const FMatrix& s, std::size_t row, std::size_t col) {
    const std::size_t n = s.rows();
    FMatrix m(n - 1, n - 1);
    for (std::size_t i = 0, mi = 0; i < n; ++i) {
        if (i == row) continue;
        for (std::size_t j = 0, mj = 0; j < n; ++j) {
            if (j == col) continue;
            m(mi, mj++) = s(i, j);
        }
        ++mi;
    }
    return m;
}

} // namespace detail

/// Cofactor expansion along the first row.
inline Expr determinant(const FMatrix& s) {
    if (!s.is_square()) throw DimensionError("determinant of non-square " + s.shape() + " matrix");
    const std::size_t n = s.rows();
    if (n == 0) return 1;
    if (n == 1) return s(0, 0);
    if (n == 2) return s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
    Expr d;
    for (std::size_t j = 0; j < n; ++j) {
        if (s(0, j).is_zero()) continue;
        Expr c = s(0, j) * determinant(detail::minor_of(s, 0, j));
        if (j % 2) d -= c;
        else d += c;
    }
    return d;
}

/// Transposed cofactor matrix, so S * adj(S) = det(S) * I.
inline FMatrix adjugate(const FMatrix& s) {
    if (!s.is_square()) throw DimensionError("adjugate of non-square " + s.shape() + " matrix");
    const std::size_t n = s.rows();
    FMatrix adj(n, n);
    if (n == 1) {
        adj(0, 0) = 1;
        return adj;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Expr c = determinant(detail::minor_of(s, i, j));
            adj(j, i) = (i + j) % 2 ? -c : c;
        }
    return adj;
}

inline FMatrix adjugate_inverse(const FMatrix& s) {
    const Expr det = determinant(s);
    if (det.is_zero())
        throw SingularMatrixError("singular over the function field: determinant is identically zero", det.to_string());
    return det.reciprocal() * adjugate(s);
}

/// Numerator of det(R^t R) when it is non-constant: the polynomial whose
/// zero set is where R may drop rank pointwise.
inline std::optional<Polynomial> rank_drop_locus(const FMatrix& r) {
    const Expr det = determinant(r.transpose() * r);
    if (det.is_zero() || det.numerator().is_constant()) return std::nullopt;
    return det.numerator().monic();
}

/// (R^t R)^{-1} R^t for a tall matrix R of full column rank over the
/// rational-function field.
inline FMatrix left_pseudo_inverse(const FMatrix& r) {
    if (r.rows() < r.cols())
        throw DimensionError("left pseudo-inverse needs rows >= cols, got " + r.shape());
    const FMatrix rt = r.transpose();
    const FMatrix gram = rt * r;
    const Expr det = determinant(gram);
    if (det.is_zero())
        throw SingularMatrixError("no generic left inverse: det(R^t R) = " + det.to_string() +
                                      " vanishes identically for R^t R = " + gram.to_string(),
                                  det.to_string());
    return (det.reciprocal() * adjugate(gram)) * rt;
}

} // namespace galg
