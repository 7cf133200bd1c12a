#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pclab/block.hpp"
#include "pclab/error.hpp"
#include "pclab/series.hpp"

namespace pclab {

/// Coefficients given for initial data: orders 0 .. kDefaultWindow-1, i.e.
/// eight beyond the leading order.
inline constexpr int kDefaultWindow = 9;

struct ModelParams {
    std::size_t n = 1;
    Mat alpha;  ///< the constant term of the recursion, n x n
    int m = 2;  ///< index of the state carrying the zero, m >= 2

    ModelParams() = default;
    ModelParams(Mat alpha_, int m_);
};

/// beta_{n+1} = n beta_n^-1 - beta_{n-1} - beta_n - alpha
LaurentSeries step_forward(int n_index, const LaurentSeries& beta_prev,
                           const LaurentSeries& beta_cur, const ModelParams& params);

/// beta_{n-1} = n beta_n^-1 - beta_{n+1} - beta_n - alpha (time reversal).
LaurentSeries step_backward(int n_index, const LaurentSeries& beta_next,
                            const LaurentSeries& beta_cur, const ModelParams& params);

/// Zero-to-window when (prev, cur, next) satisfy the recursion at n_index.
LaurentSeries recursion_residual(int n_index, const LaurentSeries& beta_prev,
                                 const LaurentSeries& beta_cur, const LaurentSeries& beta_next,
                                 const ModelParams& params);

struct StepFailure {
    int offset;  ///< the state beta_{m+offset} that could not be produced
    ErrorKind kind;
    std::string message;
};

/// beta_{m-1}, beta_m, beta_{m+1}, ...
struct TrajectorySegment {
    int m = 2;
    std::vector<LaurentSeries> states;
    std::optional<StepFailure> failure;

    /// beta_{m+offset}; offset ranges over -1 .. states.size()-2.
    const LaurentSeries& at(int offset) const { return states.at(static_cast<std::size_t>(offset + 1)); }
    bool has(int offset) const {
        return offset >= -1 && static_cast<std::size_t>(offset + 1) < states.size();
    }
    /// Largest offset present.
    int last_offset() const { return static_cast<int>(states.size()) - 2; }

    /// Window to which each consecutive triple's residual is certified zero,
    /// or -1 if the residual is nonzero inside its window.
    std::vector<int> residual_windows(const ModelParams& params) const;
};

/// Runs `steps` forward steps from (beta_{m-1}, beta_m). Analysis failures
/// stop the run and are recorded on the segment rather than thrown.
TrajectorySegment run_trajectory(const LaurentSeries& initial_prev, const LaurentSeries& initial_cur,
                                 const ModelParams& params, int steps);

/// phi_n = M beta_n M^-1, delta = M alpha M^-1. Throws Singular.
std::pair<TrajectorySegment, ModelParams> conjugate(const TrajectorySegment& segment, const Mat& M,
                                                    const ModelParams& params);
LaurentSeries conjugate(const LaurentSeries& s, const Mat& M, const Mat& M_inv);

/// Low-order data for the two initial states; missing orders are zero.
struct InitialData {
    std::vector<Mat> beta_prev;  ///< orders 0, 1, 2, ...
    std::vector<Mat> beta_cur;   ///< orders 0, 1, 2, ...
};

struct InitialState {
    LaurentSeries beta_prev;
    LaurentSeries beta_cur;
    ModelParams params;  ///< alpha conjugated along with the states
    Mat similarity;      ///< M used for the normalization (I if none needed)
};

/// Pads both states to `window`, conjugates the pair and alpha so that
/// beta_{m,0} has zero first r rows, and certifies det beta_m = O(eps^r)
/// exactly. Throws RankMismatch when rank beta_{m,0} < n - r and
/// DegenerateData when det beta_m has valuation other than r (including
/// rank beta_{m,0} > n - r).
InitialState build_initial(const InitialData& data, const BlockPartition& p,
                           const ModelParams& params, int window = kDefaultWindow);

} // namespace pclab
