#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "pclab/block.hpp"
#include "pclab/matrix.hpp"
#include "pclab/scalar.hpp"

namespace pclab {

// Windows
// -------
// A truncated series knows its coefficients exactly for every order below
// its window and nothing above it. A window of kExactWindow means the
// stored coefficients are the whole series (a Laurent polynomial). Every
// operation returns the tightest window its inputs certify; coefficients
// are never reported past a window.
inline constexpr int kExactWindow = 1 << 28;

/// Inverting an exact non-monomial series yields an infinite expansion;
/// this many terms of it are certified.
inline constexpr int kExactInverseTerms = 16;

int clamp_window(long w) noexcept;

/// Truncated scalar Laurent series over Gaussian rationals. Elements of the
/// field used by matrix series elimination.
class ScalarSeries {
public:
    ScalarSeries() = default;  // zero, exact

    static ScalarSeries zero(int window);
    static ScalarSeries constant(const Scalar& c, int window = kExactWindow);
    /// Leading zeros are stripped, coefficients at or above window dropped.
    static ScalarSeries from_coeffs(int nu, std::vector<Scalar> coeffs, int window);

    /// True when known to vanish below the window.
    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool exact() const noexcept { return window_ >= kExactWindow; }
    /// Order of the leading nonzero coefficient; equals window() for zero.
    int valuation() const noexcept { return is_zero() ? window_ : nu_; }
    int window() const noexcept { return window_; }
    /// Number of certified coefficients from the leading one.
    int relative_precision() const noexcept { return window_ - valuation(); }
    const Scalar& lead() const { return coeffs_.front(); }
    /// Coefficient of eps^k; k must be below the window.
    Scalar coeff(int k) const;
    const std::vector<Scalar>& coeffs() const noexcept { return coeffs_; }

    ScalarSeries reciprocal() const;

    friend ScalarSeries operator+(const ScalarSeries& a, const ScalarSeries& b);
    friend ScalarSeries operator-(const ScalarSeries& a, const ScalarSeries& b);
    friend ScalarSeries operator-(const ScalarSeries& a);
    friend ScalarSeries operator*(const ScalarSeries& a, const ScalarSeries& b);
    friend ScalarSeries operator/(const ScalarSeries& a, const ScalarSeries& b) {
        return a * b.reciprocal();
    }

private:
    int nu_ = kExactWindow;
    std::vector<Scalar> coeffs_;  // coeffs_[k] is the eps^(nu_+k) term
    int window_ = kExactWindow;
};

/// Truncated N x N matrix Laurent series in eps. Coefficients of orders in
/// [nu, nu + coeffs.size()) are stored; orders from there up to the window
/// are zero. The leading stored coefficient is nonzero unless the series is
/// the zero-to-window marker (no coefficients).
class LaurentSeries {
public:
    LaurentSeries() = default;

    static LaurentSeries zero(std::size_t n, int window);
    static LaurentSeries constant(const Mat& c, int window = kExactWindow);
    static LaurentSeries from_coeffs(int nu, std::vector<Mat> coeffs, int window);

    std::size_t n() const noexcept { return n_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool exact() const noexcept { return window_ >= kExactWindow; }
    /// Order of the first nonzero coefficient; window() for zero series.
    int nu() const noexcept { return is_zero() ? window_ : nu_; }
    int window() const noexcept { return window_; }
    const std::vector<Mat>& coeffs() const noexcept { return coeffs_; }
    /// Coefficient matrix of eps^k. Throws InsufficientTruncation at or past
    /// the window.
    Mat coeff(int k) const;
    ScalarSeries entry(std::size_t i, std::size_t j) const;

private:
    std::size_t n_ = 0;
    int nu_ = kExactWindow;
    std::vector<Mat> coeffs_;
    int window_ = kExactWindow;
};

LaurentSeries ls_add(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries ls_sub(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries ls_neg(const LaurentSeries& a);
LaurentSeries ls_scale(const LaurentSeries& a, const Scalar& s);
/// Cauchy product.
LaurentSeries ls_mul(const LaurentSeries& a, const LaurentSeries& b);
/// Gauss-Jordan over truncated scalar Laurent series with full pivoting:
/// minimal certified valuation, then lowest row, then lowest column.
/// Throws SingularToWindow when no entry of the active submatrix is certified
/// nonzero and InsufficientTruncation when the result has no certified
/// coefficient.
LaurentSeries ls_inverse(const LaurentSeries& a);
/// Drop every order at or past new_window. Throws WindowGrow.
LaurentSeries ls_truncate(const LaurentSeries& a, int new_window);

inline LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return ls_add(a, b); }
inline LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return ls_sub(a, b); }
inline LaurentSeries operator-(const LaurentSeries& a) { return ls_neg(a); }
inline LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) { return ls_mul(a, b); }
inline LaurentSeries operator*(const Scalar& s, const LaurentSeries& a) { return ls_scale(a, s); }

/// Coefficientwise equality over the shared window.
bool agree_to_window(const LaurentSeries& a, const LaurentSeries& b);

struct DetValuation {
    int order;    ///< det = lead eps^order + O(eps^(order+1))
    Scalar lead;  ///< nonzero
};

/// Throws InsufficientTruncation when the elimination runs out of certified
/// pivots before the determinant's leading term is determined.
DetValuation ls_det_valuation(const LaurentSeries& a);

/// Valuation measurement that degrades to a certified lower bound instead
/// of throwing.
struct ValuationBound {
    int order = 0;
    bool exact = false;  ///< false: det = O(eps^order), nothing more is known
    std::optional<Scalar> lead;
};

ValuationBound det_valuation_bound(const LaurentSeries& a);

enum class SeriesClass {
    Regular,    ///< nu >= 0
    KRing,      ///< regular, order-0 coefficient has zero first r rows
    PoleLRing,  ///< nu == -1, pole coefficient has zero last n - r columns
    Other,
};

std::string_view to_string(SeriesClass c) noexcept;
SeriesClass classify(const LaurentSeries& a, const BlockPartition& p);

/// Membership tests used by the ring properties. KRing implies Regular.
bool in_regular(const LaurentSeries& a);
bool in_k_ring(const LaurentSeries& a, const BlockPartition& p);
/// Regular with order-0 coefficient in the L pattern (zero last n - r columns).
bool in_l_ring(const LaurentSeries& a, const BlockPartition& p);

} // namespace pclab
