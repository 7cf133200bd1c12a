#include "pclab/block.hpp"

#include <string>

#include "pclab/error.hpp"

namespace pclab {

BlockPartition::BlockPartition(std::size_t n, std::size_t r) : n_(n), r_(r) {
    if (n == 0 || r == 0 || r > n) {
        throw Error(ErrorKind::BadPartition,
                    "need 1 <= r <= n, got n=" + std::to_string(n) + " r=" + std::to_string(r));
    }
}

Blocks blocks(const Mat& a, const BlockPartition& p) {
    if (!a.square() || a.rows() != p.n()) {
        throw Error(ErrorKind::BadPartition, "matrix size does not match partition");
    }
    if (p.maximal()) {
        throw Error(ErrorKind::BadPartition, "r == n leaves no off-diagonal blocks");
    }
    const std::size_t r = p.r();
    const std::size_t s = p.rest();
    return {a.block(0, 0, r, r), a.block(0, r, r, s), a.block(r, 0, s, r), a.block(r, r, s, s)};
}

Mat assemble(const Blocks& b) {
    const std::size_t r = b.a.rows();
    const std::size_t s = b.d.rows();
    Mat m(r + s, r + s);
    m.set_block(0, 0, b.a);
    m.set_block(0, r, b.b);
    m.set_block(r, 0, b.c);
    m.set_block(r, r, b.d);
    return m;
}

namespace {

Mat checked_inverse(const Mat& m, const char* what) {
    if (det(m).is_zero()) {
        throw Error(ErrorKind::SingularBlock, std::string(what) + " is singular");
    }
    return inverse(m);
}

} // namespace

Mat schur_D(const Mat& a, const BlockPartition& p) {
    const Blocks k = blocks(a, p);
    return k.a - k.b * checked_inverse(k.d, "D") * k.c;
}

Mat schur_A(const Mat& a, const BlockPartition& p) {
    const Blocks k = blocks(a, p);
    return k.d - k.c * checked_inverse(k.a, "A") * k.b;
}

namespace {

Mat inverse_via_d(const Blocks& k) {
    const Mat d_inv = checked_inverse(k.d, "D");
    const Mat s_inv = checked_inverse(k.a - k.b * d_inv * k.c, "S_D");
    const Mat top_right = -(s_inv * k.b * d_inv);
    const Mat bottom_left = -(d_inv * k.c * s_inv);
    const Mat bottom_right =
        d_inv * (Mat::identity(k.d.rows()) + k.c * s_inv * k.b * d_inv);
    return assemble({s_inv, top_right, bottom_left, bottom_right});
}

Mat inverse_via_a(const Blocks& k) {
    const Mat a_inv = checked_inverse(k.a, "A");
    const Mat s_inv = checked_inverse(k.d - k.c * a_inv * k.b, "S_A");
    const Mat top_left = a_inv + a_inv * k.b * s_inv * k.c * a_inv;
    const Mat top_right = -(a_inv * k.b * s_inv);
    const Mat bottom_left = -(s_inv * k.c * a_inv);
    return assemble({top_left, top_right, bottom_left, s_inv});
}

Mat inverse_symmetric(const Blocks& k) {
    const Mat a_inv = checked_inverse(k.a, "A");
    const Mat d_inv = checked_inverse(k.d, "D");
    const Mat sd_inv = checked_inverse(k.a - k.b * d_inv * k.c, "S_D");
    const Mat sa_inv = checked_inverse(k.d - k.c * a_inv * k.b, "S_A");
    return assemble({sd_inv, -(sd_inv * k.b * d_inv), -(d_inv * k.c * sd_inv), sa_inv});
}

} // namespace

Mat block_inverse(const Mat& a, const BlockPartition& p, SchurBranch branch) {
    const Blocks k = blocks(a, p);
    switch (branch) {
    case SchurBranch::ViaD: return inverse_via_d(k);
    case SchurBranch::ViaA: return inverse_via_a(k);
    case SchurBranch::Symmetric: return inverse_symmetric(k);
    case SchurBranch::Auto: break;
    }
    if (!det(k.d).is_zero() && !det(k.a - k.b * inverse(k.d) * k.c).is_zero()) {
        return inverse_via_d(k);
    }
    if (!det(k.a).is_zero() && !det(k.d - k.c * inverse(k.a) * k.b).is_zero()) {
        return inverse_via_a(k);
    }
    throw Error(ErrorKind::Singular, "no Schur branch applies");
}

Mat similarity_normalize(const Mat& b0, std::size_t r) {
    if (!b0.square()) {
        throw Error(ErrorKind::NonSquare, "similarity_normalize needs a square matrix");
    }
    const std::size_t n = b0.rows();
    const std::size_t rk = rank(b0);
    if (r > n || rk != n - r) {
        throw Error(ErrorKind::RankMismatch,
                    "rank " + std::to_string(rk) + " but n - r = " + std::to_string(n - r));
    }
    const auto null = left_nullspace(b0);

    Mat m(n, n);
    std::size_t filled = 0;
    for (const auto& v : null) {
        m.set_block(filled++, 0, v);
    }
    for (std::size_t j = 0; j < n && filled < n; ++j) {
        Mat trial = m;
        trial(filled, j) = Scalar(1);
        if (rank(trial.block(0, 0, filled + 1, n)) == filled + 1) {
            m = std::move(trial);
            ++filled;
        }
    }
    return m;
}

} // namespace pclab
