#pragma once

#include <cstddef>

#include "pclab/matrix.hpp"

namespace pclab {

/// Split of an n x n matrix into an r x r top-left block A and the
/// complementary blocks B, C, D. r == n is the maximal-rank case, where
/// B, C and D are empty.
class BlockPartition {
public:
    BlockPartition(std::size_t n, std::size_t r);

    std::size_t n() const noexcept { return n_; }
    std::size_t r() const noexcept { return r_; }
    std::size_t rest() const noexcept { return n_ - r_; }
    bool maximal() const noexcept { return r_ == n_; }

private:
    std::size_t n_;
    std::size_t r_;
};

struct Blocks {
    Mat a;  // r x r
    Mat b;  // r x (n-r)
    Mat c;  // (n-r) x r
    Mat d;  // (n-r) x (n-r)
};

/// Throws BadPartition unless a is p.n() x p.n() and p.r() < p.n().
Blocks blocks(const Mat& a, const BlockPartition& p);
Mat assemble(const Blocks& b);

/// A - B D^-1 C. Throws SingularBlock when det D == 0.
Mat schur_D(const Mat& a, const BlockPartition& p);
/// D - C A^-1 B. Throws SingularBlock when det A == 0.
Mat schur_A(const Mat& a, const BlockPartition& p);

enum class SchurBranch {
    Auto,       ///< first applicable of ViaD, ViaA
    ViaD,       ///< det D, det S_D != 0
    ViaA,       ///< det A, det S_A != 0
    Symmetric,  ///< all four determinants nonzero; diagonal from both complements
};

/// Inverse assembled from the Schur-complement block formula of the chosen
/// branch. Throws SingularBlock when the branch preconditions fail and
/// Singular when no branch applies under Auto.
Mat block_inverse(const Mat& a, const BlockPartition& p, SchurBranch branch = SchurBranch::Auto);

/// Returns an invertible M whose first r rows span the left nullspace of
/// b0, completed greedily with unit vectors, so that the first r rows of
/// M b0 M^-1 vanish. Throws RankMismatch unless rank(b0) == n - r.
Mat similarity_normalize(const Mat& b0, std::size_t r);

} // namespace pclab
