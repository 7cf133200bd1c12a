#include <doctest.h>

#include "oracles.hpp"
#include "pclab/error.hpp"
#include "support.hpp"

using namespace pclab;

namespace {

InitialState scalar_state(int m, const Scalar& prev0, const Scalar& cur1, const Scalar& alpha, int window = 9) {
    InitialData d;
    d.beta_prev = {Mat{{prev0}}};
    d.beta_cur = {Mat{{Scalar(0)}}, Mat{{cur1}}};
    return build_initial(d, BlockPartition(1, 1), ModelParams(Mat{{alpha}}, m), window);
}

Mat m22(long a, long b, long c, long d) { return Mat{{Scalar(a), Scalar(b)}, {Scalar(c), Scalar(d)}}; }

} // namespace

TEST_CASE("certificates on the hand example") {
    // D = 1, C = 0, B_{m-1,0} = 0, D_{m-1,0} = 0, alpha = 0, m = 2
    const BlockPartition p(2, 1);
    const ModelParams params(Mat::zero(2, 2), 2);
    const ZTriple z = compute_Z(m22(1, 0, 0, 0), m22(0, 0, 0, 1), p, params);
    REQUIRE(z.z3.has_value());
    CHECK(*z.z1 == Mat{{Scalar(1)}});
    CHECK(*z.z2 == Mat{{Scalar(1)}});
    CHECK(*z.z3 == Mat{{Scalar(2)}});
    CHECK(*z.det3 == Scalar(2));
    CHECK_FALSE(z.first_singular().has_value());
    CHECK_THROWS_AS(compute_Z(m22(1, 0, 0, 0), m22(0, 0, 1, 0), p, params), Error);
}

TEST_CASE("Z1 reduces when C and alpha_12 vanish") {
    Rng rng(51);
    const BlockPartition p(3, 1);
    for (int trial = 0; trial < 5; ++trial) {
        Mat cur0(3, 3);
        cur0.set_block(1, 1, random_mat(rng, 2, 2, support::small_range()));
        const Mat prev0 = random_mat(rng, 3, 3, support::small_range());
        Mat alpha = random_mat(rng, 3, 3, support::small_range());
        alpha.set_block(0, 1, Mat::zero(1, 2));
        const Blocks bc = blocks(cur0, p);
        if (det(bc.d).is_zero()) {
            continue;
        }
        const int m = 2 + trial;
        const ZTriple z = compute_Z(prev0, cur0, p, ModelParams(alpha, m));
        const Mat expected = Scalar(m) * inverse(bc.d) - blocks(prev0, p).d - bc.d - blocks(alpha, p).d;
        CHECK(*z.z1 == expected);
    }
}

TEST_CASE("certificates agree with their definitions on iterated coefficients") {
    Rng rng(52);
    for (int trial = 0; trial < 12; ++trial) {
        SampleSpec spec;
        spec.n = 2 + static_cast<std::size_t>(trial % 2);
        spec.r = 1 + static_cast<std::size_t>(trial % 3 == 2 && spec.n == 3);
        spec.m = 2 + trial % 3;
        const Instance inst = random_instance(rng, spec);
        const BlockPartition p = inst.partition();
        InitialState init = inst.build();
        const ZTriple z = compute_Z(init, p);
        REQUIRE(z.z3.has_value());
        const auto seg = run_trajectory(init.beta_prev, init.beta_cur, init.params, 4);
        REQUIRE_FALSE(seg.failure.has_value());
        const Blocks b0 = blocks(init.beta_cur.coeff(0), p);
        const Mat coupling = inverse(b0.d) * b0.c;
        auto order0 = [&](int k) { return blocks(seg.at(k).nu() > 0 ? Mat::zero(p.n(), p.n()) : seg.at(k).coeff(0), p); };
        CHECK(*z.z1 == order0(1).d + coupling * order0(1).b);
        CHECK(*z.z2 == order0(2).d + coupling * order0(2).b);
        CHECK(*z.z3 == order0(3).d);
    }
}

TEST_CASE("prediction") {
    ZTriple z;
    z.det1 = Scalar(1);
    z.det2 = Scalar(2);
    z.det3 = Scalar(3);
    const auto pr = predict(z, BlockPartition(3, 2));
    REQUIRE(pr.valuations.has_value());
    CHECK(*pr.valuations == std::array<int, 4>{-2, -2, 2, 0});
    ZTriple z1;
    z1.det1 = Scalar(0);
    CHECK(predict(z1, BlockPartition(2, 1)).not_generic == Certificate::Z1);
    ZTriple z3 = z;
    z3.det3 = Scalar(0);
    CHECK(predict(z3, BlockPartition(2, 1)).not_generic == Certificate::Z3);
    ZTriple skipped;
    skipped.skipped = true;
    CHECK(*predict(skipped, BlockPartition(2, 2)).valuations == std::array<int, 4>{-2, -2, 2, 0});
}

TEST_CASE("scalar verdicts") {
    const auto generic = analyze(scalar_state(2, Scalar(1), Scalar(1), Scalar(0)), BlockPartition(1, 1));
    CHECK(generic.verdict.kind == VerdictKind::Confined);
    CHECK(generic.verdict.time == 4);
    REQUIRE(generic.measured.valuations.size() >= 4);
    const int expected[] = {-1, -1, 1, 0};
    for (int k = 0; k < 4; ++k) {
        CHECK(generic.measured.valuations[static_cast<std::size_t>(k)].exact);
        CHECK(generic.measured.valuations[static_cast<std::size_t>(k)].order == expected[k]);
    }
    CHECK(generic.z.skipped);

    const auto locus = analyze(scalar_state(2, Scalar(1), Scalar(1), Scalar(1)), BlockPartition(1, 1));
    CHECK(locus.verdict.kind == VerdictKind::NotConfined);
    CHECK(locus.verdict.step == 4);
    CHECK(locus.measured.valuations[3].order >= 1);
}

TEST_CASE("short windows end in Indeterminate, not a guess") {
    const auto rep = analyze(scalar_state(2, Scalar(1), Scalar(1), Scalar(0), 4), BlockPartition(1, 1));
    CHECK(rep.verdict.kind != VerdictKind::NotConfined);
    if (rep.verdict.kind == VerdictKind::Indeterminate) {
        CHECK(rep.verdict.step >= 1);
    }
}

TEST_CASE("certificate record on generic and engineered data") {
    Rng rng(53);
    SampleSpec spec;
    spec.n = 2;
    spec.r = 1;
    spec.m = 2;
    const Instance inst = random_instance(rng, spec);
    const auto rec = verify_theorem2(inst.build(), inst.partition());
    CHECK(rec.all_passed());
    CHECK(rec.report.verdict.kind == VerdictKind::Confined);
    for (const char* name : {"Z1 biconditional", "Z2 biconditional", "Z3 biconditional", "Z1 definitional",
                             "C_{m+3,0} fixture", "Schur fixture at m+3", "class chain", "reversibility"}) {
        const CheckResult* c = rec.find(name);
        REQUIRE_MESSAGE(c != nullptr, name);
        CHECK_MESSAGE(c->passed, name, ": ", c->detail);
    }

    for (Certificate which : {Certificate::Z1, Certificate::Z2, Certificate::Z3}) {
        for (std::size_t n : {2u, 3u}) {
            SampleSpec s = spec;
            s.n = n;
            s.r = 1;
            s.m = 3;
            const Instance w = engineer_witness(rng, s, which);
            const BlockPartition p = w.partition();
            const auto init = w.build();
            const auto r = verify_theorem2(init, p);
            CHECK(r.all_passed());
            CHECK(r.report.z.first_singular() == which);
            CHECK(r.report.verdict.kind == VerdictKind::NotConfined);
            const int k = static_cast<int>(which);
            const auto& v = r.report.measured.valuations.at(static_cast<std::size_t>(k));
            const int generic[] = {-1, -1, 1};
            CHECK(!(v.exact && v.order == generic[k]));
        }
    }
}

TEST_CASE("maximal rank skips the certificates") {
    Rng rng(54);
    SampleSpec spec;
    spec.n = 2;
    spec.r = 2;
    spec.m = 3;
    const Instance inst = random_instance(rng, spec);
    const auto rec = verify_theorem2(inst.build(), inst.partition());
    CHECK(rec.report.z.skipped);
    CHECK(rec.all_passed());
    CHECK(rec.report.verdict.kind == VerdictKind::Confined);
    REQUIRE(rec.report.predicted.valuations.has_value());
    CHECK(*rec.report.predicted.valuations == std::array<int, 4>{-2, -2, 2, 0});
}
