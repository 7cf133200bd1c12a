#include "pclab/series.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "pclab/error.hpp"

namespace pclab {

int clamp_window(long w) noexcept {
    return w >= kExactWindow / 2 ? kExactWindow : static_cast<int>(w);
}

// ---------------------------------------------------------------------------
// ScalarSeries

ScalarSeries ScalarSeries::zero(int window) {
    ScalarSeries s;
    s.window_ = clamp_window(window);
    s.nu_ = s.window_;
    return s;
}

ScalarSeries ScalarSeries::constant(const Scalar& c, int window) {
    return from_coeffs(0, {c}, window);
}

ScalarSeries ScalarSeries::from_coeffs(int nu, std::vector<Scalar> coeffs, int window) {
    window = clamp_window(window);
    if (nu < window) {
        const auto keep = static_cast<std::size_t>(std::min<long>(
            static_cast<long>(coeffs.size()), static_cast<long>(window) - nu));
        coeffs.resize(keep);
    } else {
        coeffs.clear();
    }
    auto first = std::find_if(coeffs.begin(), coeffs.end(), [](const Scalar& c) { return !c.is_zero(); });
    if (first == coeffs.end()) {
        return zero(window);
    }
    nu += static_cast<int>(first - coeffs.begin());
    coeffs.erase(coeffs.begin(), first);
    while (coeffs.back().is_zero()) {
        coeffs.pop_back();
    }
    ScalarSeries s;
    s.nu_ = nu;
    s.coeffs_ = std::move(coeffs);
    s.window_ = window;
    return s;
}

Scalar ScalarSeries::coeff(int k) const {
    if (k >= window_) {
        throw Error(ErrorKind::InsufficientTruncation,
                    "order " + std::to_string(k) + " is past the window " + std::to_string(window_));
    }
    const long idx = static_cast<long>(k) - nu_;
    if (is_zero() || idx < 0 || idx >= static_cast<long>(coeffs_.size())) {
        return Scalar(0);
    }
    return coeffs_[static_cast<std::size_t>(idx)];
}

ScalarSeries ScalarSeries::reciprocal() const {
    if (is_zero()) {
        throw Error(ErrorKind::SingularToWindow, "reciprocal of a series vanishing to its window");
    }
    int terms = 0;
    int window = 0;
    if (exact()) {
        if (coeffs_.size() == 1) {
            return from_coeffs(-nu_, {coeffs_.front().reciprocal()}, kExactWindow);
        }
        terms = kExactInverseTerms;
        window = -nu_ + terms;
    } else {
        terms = window_ - nu_;
        window = window_ - 2 * nu_;
    }
    std::vector<Scalar> out(static_cast<std::size_t>(terms));
    const Scalar inv0 = coeffs_.front().reciprocal();
    out[0] = inv0;
    for (int k = 1; k < terms; ++k) {
        Scalar acc;
        const int top = std::min<int>(k, static_cast<int>(coeffs_.size()) - 1);
        for (int i = 1; i <= top; ++i) {
            if (!coeffs_[static_cast<std::size_t>(i)].is_zero()) {
                acc += coeffs_[static_cast<std::size_t>(i)] * out[static_cast<std::size_t>(k - i)];
            }
        }
        out[static_cast<std::size_t>(k)] = -(inv0 * acc);
    }
    return from_coeffs(-nu_, std::move(out), window);
}

ScalarSeries operator+(const ScalarSeries& a, const ScalarSeries& b) {
    const int window = std::min(a.window_, b.window_);
    if (a.is_zero() && b.is_zero()) {
        return ScalarSeries::zero(window);
    }
    const int lo = std::min(a.valuation(), b.valuation());
    const long end_a = a.is_zero() ? lo : static_cast<long>(a.nu_) + static_cast<long>(a.coeffs_.size());
    const long end_b = b.is_zero() ? lo : static_cast<long>(b.nu_) + static_cast<long>(b.coeffs_.size());
    const long hi = std::min<long>(window, std::max(end_a, end_b));
    if (hi <= lo) {
        return ScalarSeries::zero(window);
    }
    std::vector<Scalar> out(static_cast<std::size_t>(hi - lo));
    for (long k = lo; k < hi; ++k) {
        Scalar& c = out[static_cast<std::size_t>(k - lo)];
        if (!a.is_zero() && k >= a.nu_ && k < end_a) {
            c += a.coeffs_[static_cast<std::size_t>(k - a.nu_)];
        }
        if (!b.is_zero() && k >= b.nu_ && k < end_b) {
            c += b.coeffs_[static_cast<std::size_t>(k - b.nu_)];
        }
    }
    return ScalarSeries::from_coeffs(lo, std::move(out), window);
}

ScalarSeries operator-(const ScalarSeries& a) {
    ScalarSeries s = a;
    for (auto& c : s.coeffs_) {
        c = -c;
    }
    return s;
}

ScalarSeries operator-(const ScalarSeries& a, const ScalarSeries& b) { return a + (-b); }

ScalarSeries operator*(const ScalarSeries& a, const ScalarSeries& b) {
    const int window = clamp_window(std::min(static_cast<long>(a.valuation()) + b.window_,
                                             static_cast<long>(b.valuation()) + a.window_));
    if (a.is_zero() || b.is_zero()) {
        return ScalarSeries::zero(window);
    }
    const long lo = static_cast<long>(a.nu_) + b.nu_;
    const long full = static_cast<long>(a.coeffs_.size() + b.coeffs_.size()) - 1;
    const long len = std::min(full, static_cast<long>(window) - lo);
    if (len <= 0) {
        return ScalarSeries::zero(window);
    }
    std::vector<Scalar> out(static_cast<std::size_t>(len));
    for (std::size_t i = 0; i < a.coeffs_.size() && static_cast<long>(i) < len; ++i) {
        if (a.coeffs_[i].is_zero()) {
            continue;
        }
        for (std::size_t j = 0; j < b.coeffs_.size() && static_cast<long>(i + j) < len; ++j) {
            if (!b.coeffs_[j].is_zero()) {
                out[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
    }
    return ScalarSeries::from_coeffs(static_cast<int>(lo), std::move(out), window);
}

// ---------------------------------------------------------------------------
// LaurentSeries

LaurentSeries LaurentSeries::zero(std::size_t n, int window) {
    LaurentSeries s;
    s.n_ = n;
    s.window_ = clamp_window(window);
    s.nu_ = s.window_;
    return s;
}

LaurentSeries LaurentSeries::constant(const Mat& c, int window) {
    return from_coeffs(0, {c}, window);
}

LaurentSeries LaurentSeries::from_coeffs(int nu, std::vector<Mat> coeffs, int window) {
    if (coeffs.empty()) {
        throw Error(ErrorKind::SizeMismatch, "from_coeffs needs at least one coefficient; use zero()");
    }
    const std::size_t n = coeffs.front().rows();
    for (const auto& c : coeffs) {
        if (!c.square() || c.rows() != n) {
            throw Error(ErrorKind::SizeMismatch, "coefficients must all be n x n");
        }
    }
    window = clamp_window(window);
    if (nu < window) {
        const auto keep = static_cast<std::size_t>(
            std::min<long>(static_cast<long>(coeffs.size()), static_cast<long>(window) - nu));
        coeffs.resize(keep);
    } else {
        coeffs.clear();
    }
    auto first = std::find_if(coeffs.begin(), coeffs.end(), [](const Mat& c) { return !c.is_zero(); });
    if (first == coeffs.end()) {
        return zero(n, window);
    }
    nu += static_cast<int>(first - coeffs.begin());
    coeffs.erase(coeffs.begin(), first);
    while (coeffs.back().is_zero()) {
        coeffs.pop_back();
    }
    LaurentSeries s;
    s.n_ = n;
    s.nu_ = nu;
    s.coeffs_ = std::move(coeffs);
    s.window_ = window;
    return s;
}

Mat LaurentSeries::coeff(int k) const {
    if (k >= window_) {
        throw Error(ErrorKind::InsufficientTruncation,
                    "order " + std::to_string(k) + " is past the window " + std::to_string(window_));
    }
    const long idx = static_cast<long>(k) - nu_;
    if (is_zero() || idx < 0 || idx >= static_cast<long>(coeffs_.size())) {
        return Mat::zero(n_, n_);
    }
    return coeffs_[static_cast<std::size_t>(idx)];
}

ScalarSeries LaurentSeries::entry(std::size_t i, std::size_t j) const {
    if (is_zero()) {
        return ScalarSeries::zero(window_);
    }
    std::vector<Scalar> c;
    c.reserve(coeffs_.size());
    for (const auto& m : coeffs_) {
        c.push_back(m(i, j));
    }
    return ScalarSeries::from_coeffs(nu_, std::move(c), window_);
}

namespace {

using SeriesMatrix = std::vector<std::vector<ScalarSeries>>;

SeriesMatrix to_entries(const LaurentSeries& a) {
    SeriesMatrix m(a.n(), std::vector<ScalarSeries>(a.n()));
    for (std::size_t i = 0; i < a.n(); ++i) {
        for (std::size_t j = 0; j < a.n(); ++j) {
            m[i][j] = a.entry(i, j);
        }
    }
    return m;
}

LaurentSeries from_entries(const SeriesMatrix& m) {
    const std::size_t n = m.size();
    int window = kExactWindow;
    int lo = kExactWindow;
    long hi = 0;
    for (const auto& row : m) {
        for (const auto& e : row) {
            window = std::min(window, e.window());
            if (!e.is_zero()) {
                lo = std::min(lo, e.valuation());
                hi = std::max<long>(hi, static_cast<long>(e.valuation()) + static_cast<long>(e.coeffs().size()));
            }
        }
    }
    if (lo >= window) {
        return LaurentSeries::zero(n, window);
    }
    hi = std::min<long>(hi, window);
    std::vector<Mat> coeffs(static_cast<std::size_t>(hi - lo), Mat::zero(n, n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto& e = m[i][j];
            if (e.is_zero()) {
                continue;
            }
            for (std::size_t k = 0; k < e.coeffs().size(); ++k) {
                const long order = e.valuation() + static_cast<long>(k);
                if (order < hi) {
                    coeffs[static_cast<std::size_t>(order - lo)](i, j) = e.coeffs()[k];
                }
            }
        }
    }
    return LaurentSeries::from_coeffs(lo, std::move(coeffs), window);
}

void require_same_size(const LaurentSeries& a, const LaurentSeries& b) {
    if (a.n() != b.n()) {
        throw Error(ErrorKind::SizeMismatch,
                    "series of size " + std::to_string(a.n()) + " and " + std::to_string(b.n()));
    }
}

long stored_end(const LaurentSeries& a) {
    return a.is_zero() ? std::numeric_limits<long>::min()
                       : static_cast<long>(a.nu()) + static_cast<long>(a.coeffs().size());
}

// Entry of the active submatrix with minimal certified valuation, ties to the
// lowest row then lowest column.
std::optional<std::pair<std::size_t, std::size_t>> choose_pivot(const SeriesMatrix& s, std::size_t k) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    int best_v = 0;
    for (std::size_t i = k; i < s.size(); ++i) {
        for (std::size_t j = k; j < s.size(); ++j) {
            const auto& e = s[i][j];
            if (!e.is_zero() && (!best || e.valuation() < best_v)) {
                best = {i, j};
                best_v = e.valuation();
            }
        }
    }
    return best;
}

void swap_columns(SeriesMatrix& s, std::size_t a, std::size_t b) {
    if (a == b) {
        return;
    }
    for (auto& row : s) {
        std::swap(row[a], row[b]);
    }
}

// A zero multiplier that is only zero to a window still has to be applied:
// it limits the certified window of the updated row.
bool skippable(const ScalarSeries& f) { return f.is_zero() && f.exact(); }

} // namespace

LaurentSeries ls_add(const LaurentSeries& a, const LaurentSeries& b) {
    require_same_size(a, b);
    const int window = std::min(a.window(), b.window());
    const int lo = std::min(a.nu(), b.nu());
    const long hi = std::min<long>(window, std::max(stored_end(a), stored_end(b)));
    if (hi <= lo) {
        return LaurentSeries::zero(a.n(), window);
    }
    std::vector<Mat> out;
    out.reserve(static_cast<std::size_t>(hi - lo));
    for (long k = lo; k < hi; ++k) {
        Mat c = Mat::zero(a.n(), a.n());
        if (!a.is_zero() && k >= a.nu() && k < stored_end(a)) {
            c += a.coeffs()[static_cast<std::size_t>(k - a.nu())];
        }
        if (!b.is_zero() && k >= b.nu() && k < stored_end(b)) {
            c += b.coeffs()[static_cast<std::size_t>(k - b.nu())];
        }
        out.push_back(std::move(c));
    }
    return LaurentSeries::from_coeffs(lo, std::move(out), window);
}

LaurentSeries ls_scale(const LaurentSeries& a, const Scalar& s) {
    if (a.is_zero() || s.is_zero()) {
        return LaurentSeries::zero(a.n(), a.window());
    }
    std::vector<Mat> out = a.coeffs();
    for (auto& c : out) {
        c *= s;
    }
    return LaurentSeries::from_coeffs(a.nu(), std::move(out), a.window());
}

LaurentSeries ls_neg(const LaurentSeries& a) { return ls_scale(a, Scalar(-1)); }

LaurentSeries ls_sub(const LaurentSeries& a, const LaurentSeries& b) {
    return ls_add(a, ls_neg(b));
}

LaurentSeries ls_mul(const LaurentSeries& a, const LaurentSeries& b) {
    require_same_size(a, b);
    const int window = clamp_window(std::min(static_cast<long>(a.nu()) + b.window(),
                                             static_cast<long>(b.nu()) + a.window()));
    if (a.is_zero() || b.is_zero()) {
        return LaurentSeries::zero(a.n(), window);
    }
    const long lo = static_cast<long>(a.nu()) + b.nu();
    const long full = static_cast<long>(a.coeffs().size() + b.coeffs().size()) - 1;
    const long len = std::min(full, static_cast<long>(window) - lo);
    if (len <= 0) {
        return LaurentSeries::zero(a.n(), window);
    }
    std::vector<Mat> out(static_cast<std::size_t>(len), Mat::zero(a.n(), a.n()));
    for (std::size_t i = 0; i < a.coeffs().size() && static_cast<long>(i) < len; ++i) {
        for (std::size_t j = 0; j < b.coeffs().size() && static_cast<long>(i + j) < len; ++j) {
            out[i + j] += a.coeffs()[i] * b.coeffs()[j];
        }
    }
    return LaurentSeries::from_coeffs(static_cast<int>(lo), std::move(out), window);
}

LaurentSeries ls_inverse(const LaurentSeries& a) {
    const std::size_t n = a.n();
    if (n == 0) {
        throw Error(ErrorKind::SizeMismatch, "empty series");
    }
    if (a.is_zero()) {
        throw Error(ErrorKind::SingularToWindow, "series vanishes to its window");
    }
    SeriesMatrix s = to_entries(a);
    SeriesMatrix aug(n, std::vector<ScalarSeries>(n, ScalarSeries::zero(kExactWindow)));
    for (std::size_t i = 0; i < n; ++i) {
        aug[i][i] = ScalarSeries::constant(Scalar(1));
    }
    std::vector<std::size_t> colperm(n);
    std::iota(colperm.begin(), colperm.end(), std::size_t{0});

    for (std::size_t k = 0; k < n; ++k) {
        const auto piv = choose_pivot(s, k);
        if (!piv) {
            throw Error(ErrorKind::SingularToWindow,
                        "no certified pivot at elimination step " + std::to_string(k));
        }
        std::swap(s[k], s[piv->first]);
        std::swap(aug[k], aug[piv->first]);
        swap_columns(s, k, piv->second);
        std::swap(colperm[k], colperm[piv->second]);

        const ScalarSeries inv = s[k][k].reciprocal();
        for (std::size_t j = k + 1; j < n; ++j) {
            s[k][j] = s[k][j] * inv;
        }
        for (std::size_t j = 0; j < n; ++j) {
            aug[k][j] = aug[k][j] * inv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || skippable(s[i][k])) {
                continue;
            }
            const ScalarSeries f = s[i][k];
            for (std::size_t j = k + 1; j < n; ++j) {
                s[i][j] = s[i][j] - f * s[k][j];
            }
            for (std::size_t j = 0; j < n; ++j) {
                aug[i][j] = aug[i][j] - f * aug[k][j];
            }
        }
    }

    // aug = (a P)^-1 = P^-1 a^-1, so row k of aug is row colperm[k] of a^-1.
    SeriesMatrix out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[colperm[k]] = std::move(aug[k]);
    }
    LaurentSeries result = from_entries(out);
    if (result.is_zero()) {
        throw Error(ErrorKind::InsufficientTruncation,
                    "inverse has no certified coefficient (window " + std::to_string(result.window()) + ")");
    }
    return result;
}

LaurentSeries ls_truncate(const LaurentSeries& a, int new_window) {
    if (new_window > a.window()) {
        throw Error(ErrorKind::WindowGrow, "cannot truncate window " + std::to_string(a.window()) +
                                               " to " + std::to_string(new_window));
    }
    if (a.is_zero()) {
        return LaurentSeries::zero(a.n(), new_window);
    }
    return LaurentSeries::from_coeffs(a.nu(), a.coeffs(), new_window);
}

bool agree_to_window(const LaurentSeries& a, const LaurentSeries& b) {
    return ls_sub(a, b).is_zero();
}

ValuationBound det_valuation_bound(const LaurentSeries& a) {
    const std::size_t n = a.n();
    SeriesMatrix s = to_entries(a);
    int order = 0;
    int sign = 1;
    Scalar lead(1);
    for (std::size_t k = 0; k < n; ++k) {
        const auto piv = choose_pivot(s, k);
        if (!piv) {
            // det = (pivots so far) * det(rest); every remaining entry is
            // O(eps^window), so det(rest) is O(eps^(sum of row minima)).
            long bound = order;
            for (std::size_t i = k; i < n; ++i) {
                int row_min = kExactWindow;
                for (std::size_t j = k; j < n; ++j) {
                    row_min = std::min(row_min, s[i][j].window());
                }
                bound += row_min;
            }
            return {clamp_window(bound), false, std::nullopt};
        }
        if (piv->first != k) {
            std::swap(s[k], s[piv->first]);
            sign = -sign;
        }
        if (piv->second != k) {
            swap_columns(s, k, piv->second);
            sign = -sign;
        }
        order += s[k][k].valuation();
        lead *= s[k][k].lead();
        const ScalarSeries inv = s[k][k].reciprocal();
        for (std::size_t i = k + 1; i < n; ++i) {
            if (skippable(s[i][k])) {
                continue;
            }
            const ScalarSeries f = s[i][k] * inv;
            for (std::size_t j = k + 1; j < n; ++j) {
                s[i][j] = s[i][j] - f * s[k][j];
            }
        }
    }
    if (sign < 0) {
        lead = -lead;
    }
    return {order, true, lead};
}

DetValuation ls_det_valuation(const LaurentSeries& a) {
    const ValuationBound b = det_valuation_bound(a);
    if (!b.exact) {
        throw Error(ErrorKind::InsufficientTruncation,
                    "determinant vanishes to order " + std::to_string(b.order) + " within the window");
    }
    return {b.order, *b.lead};
}

std::string_view to_string(SeriesClass c) noexcept {
    switch (c) {
    case SeriesClass::Regular: return "Regular";
    case SeriesClass::KRing: return "KRing";
    case SeriesClass::PoleLRing: return "PoleLRing";
    case SeriesClass::Other: return "Other";
    }
    return "Other";
}

namespace {

bool top_rows_zero(const Mat& m, std::size_t r) {
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!m(i, j).is_zero()) {
                return false;
            }
        }
    }
    return true;
}

bool right_cols_zero(const Mat& m, std::size_t r) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = r; j < m.cols(); ++j) {
            if (!m(i, j).is_zero()) {
                return false;
            }
        }
    }
    return true;
}

void require_partition(const LaurentSeries& a, const BlockPartition& p) {
    if (a.n() != p.n()) {
        throw Error(ErrorKind::BadPartition, "partition size does not match series");
    }
}

} // namespace

bool in_regular(const LaurentSeries& a) { return a.nu() >= 0 && a.window() > 0; }

bool in_k_ring(const LaurentSeries& a, const BlockPartition& p) {
    require_partition(a, p);
    return in_regular(a) && top_rows_zero(a.coeff(0), p.r());
}

bool in_l_ring(const LaurentSeries& a, const BlockPartition& p) {
    require_partition(a, p);
    return in_regular(a) && right_cols_zero(a.coeff(0), p.r());
}

SeriesClass classify(const LaurentSeries& a, const BlockPartition& p) {
    require_partition(a, p);
    if (in_regular(a)) {
        return top_rows_zero(a.coeff(0), p.r()) ? SeriesClass::KRing : SeriesClass::Regular;
    }
    if (!a.is_zero() && a.nu() == -1 && right_cols_zero(a.coeff(-1), p.r())) {
        return SeriesClass::PoleLRing;
    }
    return SeriesClass::Other;
}

} // namespace pclab
