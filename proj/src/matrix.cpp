#include "pclab/matrix.hpp"

#include <ostream>
#include <utility>

#include "pclab/error.hpp"

namespace pclab {

Mat::Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorKind::DimensionMismatch, "entry count does not match shape");
    }
}

Mat::Mat(std::initializer_list<std::initializer_list<Scalar>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw Error(ErrorKind::DimensionMismatch, "ragged initializer");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = Scalar(1);
    }
    return m;
}

bool Mat::is_zero() const {
    for (const auto& x : data_) {
        if (!x.is_zero()) {
            return false;
        }
    }
    return true;
}

Mat Mat::transpose() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

Mat Mat::block(std::size_t row0, std::size_t col0, std::size_t rows, std::size_t cols) const {
    if (row0 + rows > rows_ || col0 + cols > cols_) {
        throw Error(ErrorKind::DimensionMismatch, "block out of range");
    }
    Mat b(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            b(i, j) = (*this)(row0 + i, col0 + j);
        }
    }
    return b;
}

void Mat::set_block(std::size_t row0, std::size_t col0, const Mat& b) {
    if (row0 + b.rows() > rows_ || col0 + b.cols() > cols_) {
        throw Error(ErrorKind::DimensionMismatch, "block out of range");
    }
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            (*this)(row0 + i, col0 + j) = b(i, j);
        }
    }
}

void Mat::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) {
        return;
    }
    for (std::size_t j = 0; j < cols_; ++j) {
        std::swap((*this)(a, j), (*this)(b, j));
    }
}

Mat& Mat::operator+=(const Mat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
        throw Error(ErrorKind::DimensionMismatch, "add of differently shaped matrices");
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += o.data_[k];
    }
    return *this;
}

Mat& Mat::operator-=(const Mat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
        throw Error(ErrorKind::DimensionMismatch, "sub of differently shaped matrices");
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= o.data_[k];
    }
    return *this;
}

Mat& Mat::operator*=(const Scalar& s) {
    for (auto& x : data_) {
        x *= s;
    }
    return *this;
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_) {
        throw Error(ErrorKind::DimensionMismatch, "mul inner dimensions differ");
    }
    Mat c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Scalar& aik = a(i, k);
            if (aik.is_zero()) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols_; ++j) {
                if (!b(k, j).is_zero()) {
                    c(i, j) += aik * b(k, j);
                }
            }
        }
    }
    return c;
}

std::ostream& operator<<(std::ostream& os, const Mat& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j) {
            os << (j ? ", " : "") << m(i, j);
        }
        os << ']';
    }
    return os << ']';
}

Mat mat_arith(const Mat& a, const Mat& b, ArithKind kind) {
    switch (kind) {
    case ArithKind::Add: return a + b;
    case ArithKind::Sub: return a - b;
    case ArithKind::Mul: return a * b;
    }
    throw Error(ErrorKind::Validation, "unknown arithmetic kind");
}

Mat mat_scale(const Mat& a, const Scalar& s) { return a * s; }

namespace {

struct GaussInt {
    mpz_class re;
    mpz_class im;

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
};

GaussInt mul(const GaussInt& a, const GaussInt& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

GaussInt sub(const GaussInt& a, const GaussInt& b) { return {a.re - b.re, a.im - b.im}; }

// a / b where b divides a in Z[i].
GaussInt divexact(const GaussInt& a, const GaussInt& b) {
    const mpz_class n = b.re * b.re + b.im * b.im;
    mpz_class re = a.re * b.re + a.im * b.im;
    mpz_class im = a.im * b.re - a.re * b.im;
    mpz_divexact(re.get_mpz_t(), re.get_mpz_t(), n.get_mpz_t());
    mpz_divexact(im.get_mpz_t(), im.get_mpz_t(), n.get_mpz_t());
    return {std::move(re), std::move(im)};
}

// Row echelon form in place; returns pivot columns. Pivot is the first
// nonzero entry at or below the current row. With reduce = true the
// result is the reduced row echelon form.
std::vector<std::size_t> echelon(Mat& m, bool reduce) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && m(p, col).is_zero()) {
            ++p;
        }
        if (p == m.rows()) {
            continue;
        }
        m.swap_rows(row, p);
        const Scalar inv = m(row, col).reciprocal();
        for (std::size_t j = col; j < m.cols(); ++j) {
            m(row, j) *= inv;
        }
        for (std::size_t i = reduce ? 0 : row + 1; i < m.rows(); ++i) {
            if (i == row || m(i, col).is_zero()) {
                continue;
            }
            const Scalar f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) {
                m(i, j) -= f * m(row, j);
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace

Scalar det(const Mat& a) {
    if (!a.square()) {
        throw Error(ErrorKind::NonSquare, "det of non-square matrix");
    }
    const std::size_t n = a.rows();
    if (n == 0) {
        return Scalar(1);
    }

    // Scale each row by the lcm of its denominators so that entries are
    // Gaussian integers; det(a) = det(scaled) / prod(scale).
    std::vector<std::vector<GaussInt>> m(n, std::vector<GaussInt>(n));
    mpz_class scale = 1;
    for (std::size_t i = 0; i < n; ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < n; ++j) {
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).re().get_den_mpz_t());
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).im().get_den_mpz_t());
        }
        for (std::size_t j = 0; j < n; ++j) {
            const auto& x = a(i, j);
            m[i][j].re = x.re().get_num() * (l / x.re().get_den());
            m[i][j].im = x.im().get_num() * (l / x.im().get_den());
        }
        scale *= l;
    }

    int sign = 1;
    GaussInt prev{1, 0};
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && m[p][k].is_zero()) {
            ++p;
        }
        if (p == n) {
            return Scalar(0);
        }
        if (p != k) {
            std::swap(m[p], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = divexact(sub(mul(m[i][j], m[k][k]), mul(m[i][k], m[k][j])), prev);
            }
        }
        prev = m[k][k];
    }

    const GaussInt& d = m[n - 1][n - 1];
    return Scalar(mpq_class(sign * d.re, scale), mpq_class(sign * d.im, scale));
}

Mat inverse(const Mat& a) {
    if (!a.square()) {
        throw Error(ErrorKind::NonSquare, "inverse of non-square matrix");
    }
    const std::size_t n = a.rows();
    Mat aug(n, 2 * n);
    aug.set_block(0, 0, a);
    aug.set_block(0, n, Mat::identity(n));
    const auto pivots = echelon(aug, /*reduce=*/true);
    if (pivots.size() < n || pivots.back() >= n) {
        throw Error(ErrorKind::Singular, "matrix is not invertible");
    }
    return aug.block(0, n, n, n);
}

std::size_t rank(const Mat& a) {
    Mat m = a;
    return echelon(m, /*reduce=*/false).size();
}

std::vector<Mat> left_nullspace(const Mat& a) {
    Mat r = a.transpose();
    const auto pivots = echelon(r, /*reduce=*/true);
    const std::size_t n = r.cols();
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots) {
        is_pivot[c] = true;
    }
    std::vector<Mat> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) {
            continue;
        }
        Mat v(1, n);
        v(0, f) = Scalar(1);
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            v(0, pivots[i]) = -r(i, f);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace pclab
