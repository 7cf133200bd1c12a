#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "pclab/scalar.hpp"

namespace pclab {

/// Dense row-major matrix over Gaussian rationals.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols);
    Mat(std::size_t rows, std::size_t cols, std::vector<Scalar> entries);
    Mat(std::initializer_list<std::initializer_list<Scalar>> rows);

    static Mat zero(std::size_t rows, std::size_t cols) { return Mat(rows, cols); }
    static Mat identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<Scalar>& entries() const noexcept { return data_; }

    bool is_zero() const;
    Mat transpose() const;
    Mat block(std::size_t row0, std::size_t col0, std::size_t rows, std::size_t cols) const;
    void set_block(std::size_t row0, std::size_t col0, const Mat& b);
    void swap_rows(std::size_t a, std::size_t b);

    Mat& operator+=(const Mat& o);
    Mat& operator-=(const Mat& o);
    Mat& operator*=(const Scalar& s);

    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator-(Mat a) { return a *= Scalar(-1); }
    friend Mat operator*(Mat a, const Scalar& s) { return a *= s; }
    friend Mat operator*(const Scalar& s, Mat a) { return a *= s; }
    friend Mat operator*(const Mat& a, const Mat& b);

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

std::ostream& operator<<(std::ostream& os, const Mat& m);

enum class ArithKind { Add, Sub, Mul };

/// Dispatching form of the arithmetic operators. Throws DimensionMismatch.
Mat mat_arith(const Mat& a, const Mat& b, ArithKind kind);
Mat mat_scale(const Mat& a, const Scalar& s);

/// Determinant by Bareiss fraction-free elimination over the Gaussian
/// integers after clearing row denominators. Throws NonSquare.
Scalar det(const Mat& a);

/// Gauss-Jordan inverse, first nonzero pivot (lowest row). Throws Singular.
Mat inverse(const Mat& a);

std::size_t rank(const Mat& a);

/// Basis of {v : v a = 0}, returned as 1 x n row vectors. The basis is the
/// one read off the reduced row echelon form of a^T, so it is canonical.
std::vector<Mat> left_nullspace(const Mat& a);

} // namespace pclab
