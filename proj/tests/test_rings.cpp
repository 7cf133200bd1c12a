#include <doctest.h>

#include "oracles.hpp"
#include "pclab/block.hpp"
#include "support.hpp"

using namespace pclab;

namespace {

constexpr int kSamples = 50;
constexpr int kTerms = 6;

} // namespace

TEST_CASE("A_K and A_L are closed under sum and product") {
    Rng rng(31);
    for (int i = 0; i < kSamples; ++i) {
        const BlockPartition p = support::cycle_partition(static_cast<std::size_t>(i));
        const auto k1 = support::random_k(rng, p, kTerms);
        const auto k2 = support::random_k(rng, p, kTerms);
        CHECK(in_k_ring(k1 + k2, p));
        CHECK(in_k_ring(k1 * k2, p));
        const auto l1 = support::random_l(rng, p, kTerms);
        const auto l2 = support::random_l(rng, p, kTerms);
        CHECK(in_l_ring(l1 + l2, p));
        CHECK(in_l_ring(l1 * l2, p));
    }
}

TEST_CASE("A_K is a right ideal and A_L a left ideal") {
    Rng rng(32);
    for (int i = 0; i < kSamples; ++i) {
        const BlockPartition p = support::cycle_partition(static_cast<std::size_t>(i));
        const auto a = support::random_regular(rng, p.n(), kTerms);
        const auto k = support::random_k(rng, p, kTerms);
        const auto l = support::random_l(rng, p, kTerms);
        CHECK(in_k_ring(k * a, p));
        CHECK(in_l_ring(a * l, p));
        // pole times A_L keeps the L pattern in the pole
        const auto pole_l = ls_mul(support::eps_power(p.n(), -1), a * l);
        CHECK(classify(pole_l, p) == SeriesClass::PoleLRing);
    }
}

TEST_CASE("eps^-1 A_L times A_K is regular") {
    Rng rng(33);
    for (int i = 0; i < kSamples; ++i) {
        const BlockPartition p = support::cycle_partition(static_cast<std::size_t>(i));
        const auto l = ls_mul(support::eps_power(p.n(), -1), support::random_l(rng, p, kTerms));
        const auto k = support::random_k(rng, p, kTerms);
        REQUIRE(classify(l, p) == SeriesClass::PoleLRing);
        const auto prod = l * k;
        CHECK(prod.nu() >= 0);
        CHECK(in_regular(prod));
    }
}

TEST_CASE("valuation duality between A_K and eps^-1 A_L") {
    Rng rng(34);
    int checked = 0;
    for (int i = 0; i < kSamples; ++i) {
        const BlockPartition p = support::cycle_partition(static_cast<std::size_t>(i));
        const auto k = support::random_k(rng, p, kTerms);
        const auto dk = ls_det_valuation(k);
        // leading term of det K from the order-0 and order-1 blocks
        const Blocks b0 = blocks(k.coeff(0), p);
        const Blocks b1 = blocks(k.coeff(1), p);
        const Scalar formula = oracle::cofactor_det(assemble(Blocks{b1.a, b1.b, b0.c, b0.d}));
        if (formula.is_zero()) {
            CHECK(dk.order > static_cast<int>(p.r()));
            continue;
        }
        CHECK(dk.order == static_cast<int>(p.r()));
        CHECK(dk.lead == formula);
        const auto inv = ls_inverse(k);
        CHECK(classify(inv, p) == SeriesClass::PoleLRing);
        const auto di = ls_det_valuation(inv);
        CHECK(di.order == -static_cast<int>(p.r()));
        // det L = eps^-r det[[A0,B1],[C0,D1]] for the pole series L
        const Blocks i0 = blocks(inv.coeff(-1), p);
        const Blocks i1 = blocks(inv.coeff(0), p);
        CHECK(di.lead == oracle::cofactor_det(assemble(Blocks{i0.a, i1.b, i0.c, i1.d})));
        // and back
        const auto back = ls_inverse(inv);
        CHECK(in_k_ring(back, p));
        CHECK(agree_to_window(back, k));
        ++checked;
    }
    CHECK(checked >= 45);
}
