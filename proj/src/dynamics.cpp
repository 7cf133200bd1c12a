#include "pclab/dynamics.hpp"

#include <string>

namespace pclab {

ModelParams::ModelParams(Mat alpha_, int m_) : n(alpha_.rows()), alpha(std::move(alpha_)), m(m_) {
    if (!alpha.square() || n == 0) {
        throw Error(ErrorKind::SizeMismatch, "alpha must be a nonempty square matrix");
    }
    if (m < 2) {
        throw Error(ErrorKind::Validation, "m must be at least 2");
    }
}

LaurentSeries step_forward(int n_index, const LaurentSeries& beta_prev,
                           const LaurentSeries& beta_cur, const ModelParams& params) {
    const LaurentSeries alpha = LaurentSeries::constant(params.alpha);
    return Scalar(n_index) * ls_inverse(beta_cur) - beta_prev - beta_cur - alpha;
}

LaurentSeries step_backward(int n_index, const LaurentSeries& beta_next,
                            const LaurentSeries& beta_cur, const ModelParams& params) {
    // The recursion is symmetric in beta_{n-1} and beta_{n+1}.
    return step_forward(n_index, beta_next, beta_cur, params);
}

LaurentSeries recursion_residual(int n_index, const LaurentSeries& beta_prev,
                                 const LaurentSeries& beta_cur, const LaurentSeries& beta_next,
                                 const ModelParams& params) {
    return step_forward(n_index, beta_prev, beta_cur, params) - beta_next;
}

std::vector<int> TrajectorySegment::residual_windows(const ModelParams& params) const {
    std::vector<int> out;
    for (std::size_t i = 1; i + 1 < states.size(); ++i) {
        const int n_index = m + static_cast<int>(i) - 1;
        const auto res = recursion_residual(n_index, states[i - 1], states[i], states[i + 1], params);
        out.push_back(res.is_zero() ? res.window() : -1);
    }
    return out;
}

TrajectorySegment run_trajectory(const LaurentSeries& initial_prev, const LaurentSeries& initial_cur,
                                 const ModelParams& params, int steps) {
    if (steps < 1) {
        throw Error(ErrorKind::Validation, "steps must be at least 1");
    }
    TrajectorySegment seg;
    seg.m = params.m;
    seg.states = {initial_prev, initial_cur};
    for (int k = 0; k < steps; ++k) {
        const int n_index = params.m + k;
        try {
            seg.states.push_back(step_forward(n_index, seg.states[seg.states.size() - 2],
                                              seg.states.back(), params));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::InsufficientTruncation && e.kind() != ErrorKind::SingularToWindow) {
                throw;
            }
            seg.failure = StepFailure{k + 1, e.kind(), e.what()};
            break;
        }
    }
    return seg;
}

LaurentSeries conjugate(const LaurentSeries& s, const Mat& M, const Mat& M_inv) {
    if (s.is_zero()) {
        return s;
    }
    std::vector<Mat> out;
    out.reserve(s.coeffs().size());
    for (const auto& c : s.coeffs()) {
        out.push_back(M * c * M_inv);
    }
    return LaurentSeries::from_coeffs(s.nu(), std::move(out), s.window());
}

std::pair<TrajectorySegment, ModelParams> conjugate(const TrajectorySegment& segment, const Mat& M,
                                                    const ModelParams& params) {
    const Mat M_inv = inverse(M);
    TrajectorySegment out;
    out.m = segment.m;
    out.failure = segment.failure;
    for (const auto& s : segment.states) {
        out.states.push_back(conjugate(s, M, M_inv));
    }
    ModelParams q = params;
    q.alpha = M * params.alpha * M_inv;
    return {std::move(out), std::move(q)};
}

namespace {

LaurentSeries padded(const std::vector<Mat>& coeffs, std::size_t n, int window) {
    if (coeffs.empty()) {
        return LaurentSeries::zero(n, window);
    }
    for (const auto& c : coeffs) {
        if (!c.square() || c.rows() != n) {
            throw Error(ErrorKind::SizeMismatch, "initial coefficients must be n x n");
        }
    }
    if (static_cast<int>(coeffs.size()) > window) {
        throw Error(ErrorKind::Validation, "more initial coefficients than the window holds");
    }
    return LaurentSeries::from_coeffs(0, coeffs, window);
}

} // namespace

InitialState build_initial(const InitialData& data, const BlockPartition& p,
                           const ModelParams& params, int window) {
    const std::size_t n = p.n();
    if (params.n != n) {
        throw Error(ErrorKind::SizeMismatch, "partition and alpha disagree on n");
    }
    if (window < 4) {
        throw Error(ErrorKind::Validation, "window must be at least 4");
    }
    const std::size_t r = p.r();
    const LaurentSeries prev = padded(data.beta_prev, n, window);
    const LaurentSeries cur = padded(data.beta_cur, n, window);
    if (cur.is_zero()) {
        throw Error(ErrorKind::DegenerateData, "beta_m vanishes");
    }

    const Mat b0 = cur.coeff(0);
    const std::size_t rk = rank(b0);
    if (rk > n - r) {
        throw Error(ErrorKind::DegenerateData, "rank of beta_{m,0} is " + std::to_string(rk) +
                                                   " > n - r, so det beta_m is not O(eps^r)");
    }
    if (rk < n - r) {
        throw Error(ErrorKind::RankMismatch,
                    "rank of beta_{m,0} is " + std::to_string(rk) + ", expected " + std::to_string(n - r));
    }

    const Mat M = similarity_normalize(b0, r);
    const Mat M_inv = inverse(M);
    InitialState out{conjugate(prev, M, M_inv), conjugate(cur, M, M_inv), params, M};
    out.params.alpha = M * params.alpha * M_inv;

    const ValuationBound v = det_valuation_bound(out.beta_cur);
    if (!v.exact || v.order != static_cast<int>(r)) {
        throw Error(ErrorKind::DegenerateData,
                    "det beta_m has valuation " + std::string(v.exact ? "" : ">= ") +
                        std::to_string(v.order) + ", expected exactly " + std::to_string(r));
    }
    return out;
}

} // namespace pclab
