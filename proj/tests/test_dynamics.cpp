#include <doctest.h>

#include "oracles.hpp"
#include "pclab/error.hpp"
#include "support.hpp"

using namespace pclab;

namespace {

Mat s1(const Scalar& x) { return Mat{{x}}; }

LaurentSeries scalar_const(const Scalar& x, int window) { return LaurentSeries::from_coeffs(0, {s1(x)}, window); }

LaurentSeries scalar_eps(const Scalar& x, int window) { return LaurentSeries::from_coeffs(1, {s1(x)}, window); }

// Independent residual: n beta^-1 checked by multiplying back, the rest termwise.
bool residual_holds(int n_index, const LaurentSeries& prev, const LaurentSeries& cur, const LaurentSeries& next,
                    const Mat& alpha) {
    // (next + prev + cur + alpha) * cur = n I, to the product's window
    const auto lhs = next + prev + cur + LaurentSeries::constant(alpha);
    const auto prod = oracle::series_product(lhs, cur);
    if (prod.window <= prod.lo) {
        return false;
    }
    for (int k = prod.lo; k < prod.window; ++k) {
        const Mat expected = k == 0 ? Mat::identity(cur.n()) * Scalar(n_index) : Mat::zero(cur.n(), cur.n());
        if (prod.coeffs[static_cast<std::size_t>(k - prod.lo)] != expected) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("model parameters validate") {
    CHECK_THROWS_AS(ModelParams(Mat(2, 3), 2), Error);
    CHECK_THROWS_AS(ModelParams(Mat::identity(2), 1), Error);
    CHECK(ModelParams(Mat::identity(2), 2).n == 2);
}

TEST_CASE("first forward step in the scalar case") {
    const Scalar b_prev = Scalar::rational(3, 2);
    const Scalar b_m1 = Scalar::gaussian(2, 1, 1, 1);
    const Scalar alpha = Scalar::rational(-1, 3);
    for (int m = 2; m <= 4; ++m) {
        const ModelParams params(s1(alpha), m);
        const auto next = step_forward(m, scalar_const(b_prev, 9), scalar_eps(b_m1, 9), params);
        CHECK(next.nu() == -1);
        CHECK(next.coeff(-1) == s1(Scalar(m) * b_m1.reciprocal()));
        CHECK(next.coeff(0) == s1(-b_prev - alpha));
    }
}

TEST_CASE("forced arithmetic: I^-1 - I vanishes") {
    const ModelParams params(Mat::zero(2, 2), 2);
    const auto out = step_forward(1, LaurentSeries::zero(2, kExactWindow), LaurentSeries::constant(Mat::identity(2)), params);
    CHECK(out.is_zero());
}

TEST_CASE("forward steps satisfy the recursion and invert backwards") {
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 2);
        const auto prev = support::random_regular(rng, n, 6);
        const auto cur = support::random_regular(rng, n, 6);
        const Mat alpha = random_mat(rng, n, n, support::small_range());
        const ModelParams params(alpha, 3);
        const int idx = 3 + trial % 3;
        const auto next = step_forward(idx, prev, cur, params);
        CHECK(residual_holds(idx, prev, cur, next, alpha));
        CHECK(recursion_residual(idx, prev, cur, next, params).is_zero());
        const auto back = step_backward(idx, next, cur, params);
        CHECK(agree_to_window(back, prev));
        CHECK(back.window() > 0);
    }
}

TEST_CASE("scalar trajectory pattern") {
    const ModelParams params(s1(Scalar(0)), 2);
    const auto seg = run_trajectory(scalar_const(Scalar(1), 9), scalar_eps(Scalar(1), 9), params, 5);
    REQUIRE_FALSE(seg.failure.has_value());
    REQUIRE(seg.last_offset() == 5);
    const int expected[] = {-1, -1, 1, 0};
    for (int k = 1; k <= 4; ++k) {
        const auto v = oracle::series_det_lead(seg.at(k));
        REQUIRE(v.has_value());
        CHECK(v->order == expected[k - 1]);
    }
    for (int w : seg.residual_windows(params)) {
        CHECK(w > 0);
    }
    for (std::size_t i = 0; i + 2 < seg.states.size(); ++i) {
        CHECK(residual_holds(seg.m + static_cast<int>(i), seg.states[i], seg.states[i + 1], seg.states[i + 2],
                             params.alpha));
    }
}

TEST_CASE("scalar backward run recovers the initial pair") {
    const ModelParams params(s1(Scalar::rational(1, 7)), 3);
    const auto prev = scalar_const(Scalar(2), 9);
    const auto cur = scalar_eps(Scalar::rational(-1, 2), 9);
    const auto seg = run_trajectory(prev, cur, params, 5);
    REQUIRE_FALSE(seg.failure.has_value());
    const auto [bprev, bcur] = run_backward(seg, params);
    CHECK(agree_to_window(bprev, prev));
    CHECK(agree_to_window(bcur, cur));
    CHECK(bprev.window() >= 1);
    CHECK(bcur.window() >= 2);
}

TEST_CASE("trajectory records failures instead of throwing") {
    const Mat r1{{Scalar(1), Scalar(1)}, {Scalar(1), Scalar(1)}};
    const ModelParams params(Mat::zero(2, 2), 2);
    const auto seg = run_trajectory(LaurentSeries::constant(Mat::identity(2), 4), LaurentSeries::from_coeffs(0, {r1}, 4),
                                    params, 3);
    REQUIRE(seg.failure.has_value());
    CHECK(seg.failure->offset == 1);
    CHECK(seg.last_offset() == 0);
}

TEST_CASE("constant fixed point stays regular") {
    // 3/c - c - c - alpha = c at c = 1, alpha = 0
    const ModelParams params(s1(Scalar(0)), 3);
    const auto one = LaurentSeries::constant(s1(Scalar(1)));
    const auto next = step_forward(3, one, one, params);
    CHECK(agree_to_window(next, one));
    CHECK(classify(next, BlockPartition(1, 1)) != SeriesClass::Other);
}

TEST_CASE("similarity conjugation preserves the recursion and valuations") {
    Rng rng(42);
    const std::size_t n = 2;
    const auto prev = support::random_regular(rng, n, 7);
    const auto cur = support::random_regular(rng, n, 7);
    const ModelParams params(random_mat(rng, n, n, support::small_range()), 2);
    const auto seg = run_trajectory(prev, cur, params, 3);
    REQUIRE_FALSE(seg.failure.has_value());

    const auto [same, same_params] = conjugate(seg, Mat::identity(n), params);
    for (std::size_t i = 0; i < seg.states.size(); ++i) {
        CHECK(agree_to_window(same.states[i], seg.states[i]));
    }
    CHECK(same_params.alpha == params.alpha);

    for (const Mat& m : {Mat{{Scalar(2), Scalar(0)}, {Scalar(0), Scalar(1)}},
                         Mat{{Scalar(0), Scalar(1)}, {Scalar(1), Scalar(0)}}}) {
        const auto [conj, cparams] = conjugate(seg, m, params);
        for (int w : conj.residual_windows(cparams)) {
            CHECK(w > 0);
        }
        for (std::size_t i = 0; i < seg.states.size(); ++i) {
            const auto a = oracle::series_det_lead(seg.states[i]);
            const auto b = oracle::series_det_lead(conj.states[i]);
            REQUIRE(a.has_value());
            REQUIRE(b.has_value());
            CHECK(a->order == b->order);
            CHECK(a->lead == b->lead);
        }
    }
    CHECK_THROWS_AS(conjugate(seg, Mat::zero(n, n), params), Error);
}

TEST_CASE("initial state construction") {
    SUBCASE("maximal rank") {
        InitialData d;
        d.beta_prev = {Mat::identity(2)};
        d.beta_cur = {Mat::zero(2, 2), Mat::identity(2)};
        const auto init = build_initial(d, BlockPartition(2, 2), ModelParams(Mat::zero(2, 2), 2));
        CHECK(ls_det_valuation(init.beta_cur).order == 2);
        CHECK(init.beta_cur.window() == kDefaultWindow);
    }
    SUBCASE("r = 1 in normalized form") {
        InitialData d;
        d.beta_prev = {Mat::identity(2)};
        d.beta_cur = {Mat{{Scalar(0), Scalar(0)}, {Scalar(0), Scalar(1)}}, Mat{{Scalar(1), Scalar(0)}, {Scalar(0), Scalar(0)}}};
        const auto init = build_initial(d, BlockPartition(2, 1), ModelParams(Mat::zero(2, 2), 2));
        CHECK(ls_det_valuation(init.beta_cur).order == 1);
        CHECK(init.similarity == Mat::identity(2));
    }
    SUBCASE("normalization conjugates the pair and alpha") {
        InitialData d;
        const Mat b0{{Scalar(1), Scalar(2)}, {Scalar(2), Scalar(4)}};
        d.beta_prev = {Mat::identity(2)};
        d.beta_cur = {b0, Mat{{Scalar(1), Scalar(0)}, {Scalar(0), Scalar(3)}}};
        const Mat alpha{{Scalar(1), Scalar(-1)}, {Scalar(0), Scalar(2)}};
        const auto init = build_initial(d, BlockPartition(2, 1), ModelParams(alpha, 2));
        const Mat& m = init.similarity;
        CHECK(init.beta_cur.coeff(0).block(0, 0, 1, 2).is_zero());
        CHECK(init.beta_cur.coeff(0) == m * b0 * inverse(m));
        CHECK(init.params.alpha == m * alpha * inverse(m));
        CHECK(in_k_ring(init.beta_cur, BlockPartition(2, 1)));
    }
    SUBCASE("rejections") {
        InitialData full;
        full.beta_prev = {Mat::identity(2)};
        full.beta_cur = {Mat::identity(2)};
        try {
            (void)build_initial(full, BlockPartition(2, 1), ModelParams(Mat::zero(2, 2), 2));
            FAIL("expected DegenerateData");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DegenerateData);
        }
        InitialData low;
        low.beta_prev = {Mat::identity(3)};
        low.beta_cur = {Mat::zero(3, 3), Mat::identity(3)};
        try {
            (void)build_initial(low, BlockPartition(3, 1), ModelParams(Mat::zero(3, 3), 2));
            FAIL("expected RankMismatch");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::RankMismatch);
        }
        InitialData flat;
        flat.beta_prev = {Mat::identity(2)};
        flat.beta_cur = {Mat{{Scalar(0), Scalar(0)}, {Scalar(0), Scalar(1)}}};
        try {
            (void)build_initial(flat, BlockPartition(2, 1), ModelParams(Mat::zero(2, 2), 2));
            FAIL("expected DegenerateData");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DegenerateData);
        }
        CHECK_THROWS_AS(build_initial(flat, BlockPartition(2, 1), ModelParams(Mat::zero(2, 2), 2), 3), Error);
    }
}
