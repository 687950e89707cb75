#pragma once

// Small dense matrices and an exact fraction-free (Bareiss) solver.

#include "rsmorse/qcore.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rsmorse {

template <class T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("DenseMatrix: shape mismatch in product");
        DenseMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (is_exact_zero(a(i, k))) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
            }
        return c;
    }

    friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Solves A X = B exactly (A square, B with any number of columns).
///
/// Each row of [A | B] is scaled by the lcm of its denominators so the
/// elimination runs on integers; Bareiss' exact division keeps the
/// intermediate entries bounded by minors of the scaled system.
inline DenseMatrix<Rational> solve_exact(const DenseMatrix<Rational>& A, const DenseMatrix<Rational>& B) {
    const std::size_t n = A.rows();
    if (A.cols() != n || B.rows() != n) throw std::invalid_argument("solve_exact: shape mismatch");
    const std::size_t m = B.cols();
    const std::size_t w = n + m;

    DenseMatrix<Integer> M(n, w);
    for (std::size_t i = 0; i < n; ++i) {
        Integer scale(1);
        for (std::size_t j = 0; j < n; ++j) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), A(i, j).get_den_mpz_t());
        for (std::size_t j = 0; j < m; ++j) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), B(i, j).get_den_mpz_t());
        for (std::size_t j = 0; j < w; ++j) {
            const Rational& x = j < n ? A(i, j) : B(i, j - n);
            M(i, j) = x.get_num() * (scale / x.get_den());
        }
    }

    Integer prev(1);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && M(piv, k) == 0) ++piv;
        if (piv == n) throw SingularMatrixError("solve_exact: singular matrix");
        M.swap_rows(k, piv);
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < w; ++j) {
                Integer v = M(k, k) * M(i, j) - M(i, k) * M(k, j);
                mpz_divexact(M(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
            }
            M(i, k) = 0;
        }
        prev = M(k, k);
    }

    DenseMatrix<Rational> X(n, m);
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t ii = n; ii-- > 0;) {
            Rational acc(M(ii, n + c));
            for (std::size_t j = ii + 1; j < n; ++j) acc -= Rational(M(ii, j)) * X(j, c);
            X(ii, c) = acc / Rational(M(ii, ii));
        }
    }
    return X;
}

}  // namespace rsmorse
