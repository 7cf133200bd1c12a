#pragma once

#include "pclab/sampler.hpp"

namespace support {

using namespace pclab;

inline CoefficientRange small_range() {
    CoefficientRange r;
    r.num_lo = -5;
    r.num_hi = 5;
    r.den_lo = 1;
    r.den_hi = 4;
    return r;
}

/// Regular series with `terms` random coefficients from order 0, window = terms.
inline LaurentSeries random_regular(Rng& rng, std::size_t n, int terms) {
    std::vector<Mat> cs;
    for (int k = 0; k < terms; ++k) {
        cs.push_back(random_mat(rng, n, n, small_range()));
    }
    return LaurentSeries::from_coeffs(0, std::move(cs), terms);
}

/// Element of A_K: order-0 coefficient with zero first r rows.
inline LaurentSeries random_k(Rng& rng, const BlockPartition& p, int terms) {
    std::vector<Mat> cs;
    Mat c0(p.n(), p.n());
    c0.set_block(p.r(), 0, random_mat(rng, p.rest(), p.n(), small_range()));
    cs.push_back(c0);
    for (int k = 1; k < terms; ++k) {
        cs.push_back(random_mat(rng, p.n(), p.n(), small_range()));
    }
    return LaurentSeries::from_coeffs(0, std::move(cs), terms);
}

/// Element of A_L: order-0 coefficient with zero last n - r columns.
inline LaurentSeries random_l(Rng& rng, const BlockPartition& p, int terms) {
    std::vector<Mat> cs;
    Mat c0(p.n(), p.n());
    c0.set_block(0, 0, random_mat(rng, p.n(), p.r(), small_range()));
    cs.push_back(c0);
    for (int k = 1; k < terms; ++k) {
        cs.push_back(random_mat(rng, p.n(), p.n(), small_range()));
    }
    return LaurentSeries::from_coeffs(0, std::move(cs), terms);
}

inline LaurentSeries eps_power(std::size_t n, int k) {
    return LaurentSeries::from_coeffs(k, {Mat::identity(n)}, kExactWindow);
}

inline BlockPartition cycle_partition(std::size_t i) {
    static const std::size_t shapes[][2] = {{2, 1}, {3, 1}, {3, 2}, {4, 1}, {4, 2}, {4, 3}};
    const auto& s = shapes[i % 6];
    return BlockPartition(s[0], s[1]);
}

} // namespace support
