#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "pclab/error.hpp"
#include "pclab/json_io.hpp"
#include "support.hpp"

using namespace pclab;

TEST_CASE("rng is reproducible and in range") {
    Rng a(7);
    Rng b(7);
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.uniform(-9, 9);
        CHECK(x == b.uniform(-9, 9));
        CHECK(x >= -9);
        CHECK(x <= 9);
    }
    CHECK(trial_seed(42, 0) != trial_seed(42, 1));
    CHECK(trial_seed(42, 3) == trial_seed(42, 3));
}

TEST_CASE("random instances are already normalized") {
    Rng rng(61);
    for (std::size_t n : {2u, 3u}) {
        for (std::size_t r = 1; r < n; ++r) {
            SampleSpec spec;
            spec.n = n;
            spec.r = r;
            const Instance inst = random_instance(rng, spec);
            CHECK(inst.data.beta_cur.front().block(0, 0, r, n).is_zero());
            CHECK(static_cast<int>(inst.data.beta_cur.size()) == spec.window);
        }
    }
    SampleSpec bad;
    bad.n = 2;
    bad.scalar_locus = true;
    CHECK_THROWS_AS(random_instance(rng, bad), Error);
}

TEST_CASE("sampler is deterministic and serial equals parallel") {
    SampleConfig cfg;
    cfg.spec.n = 2;
    cfg.spec.r = 1;
    cfg.trials = 12;
    cfg.seed = 42;
    const auto serial = genericity_sample(cfg, Execution::Serial);
    const auto parallel = genericity_sample(cfg, Execution::Parallel);
    std::ostringstream a;
    std::ostringstream b;
    write_csv(a, serial);
    write_csv(b, parallel);
    CHECK(a.str() == b.str());
    CHECK(serial.counts == parallel.counts);
    std::ostringstream again;
    write_csv(again, genericity_sample(cfg, Execution::Parallel));
    CHECK(again.str() == a.str());
    CHECK(a.str().rfind("trial,seed_offset,verdict,det_Z1,det_Z2,det_Z3,valuations,failing_step\n", 0) == 0);

    std::size_t total = 0;
    for (auto c : serial.counts) {
        total += c;
    }
    CHECK(total == 12);
}

TEST_CASE("scalar locus sampling never confines") {
    SampleConfig cfg;
    cfg.spec.n = 1;
    cfg.spec.r = 1;
    cfg.spec.scalar_locus = true;
    cfg.trials = 20;
    const auto stats = genericity_sample(cfg);
    CHECK(stats.count(TrialCategory::Confined) == 0);
    CHECK(stats.count(TrialCategory::NotConfinedM4) + stats.count(TrialCategory::HypothesesVoid) == 20);
}

TEST_CASE("batch verification keeps input order") {
    Rng rng(62);
    std::vector<Instance> batch;
    SampleSpec spec;
    for (int i = 0; i < 6; ++i) {
        spec.m = 2 + i % 3;
        batch.push_back(random_instance(rng, spec));
    }
    batch.push_back(engineer_witness(rng, spec, Certificate::Z2));
    const auto serial = verify_batch(batch, Execution::Serial);
    const auto parallel = verify_batch(batch, Execution::Parallel);
    REQUIRE(serial.size() == batch.size());
    REQUIRE(parallel.size() == batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        REQUIRE(serial[i].record.has_value() == parallel[i].record.has_value());
        if (serial[i].record) {
            CHECK(to_json(*serial[i].record) == to_json(*parallel[i].record));
        }
    }
    REQUIRE(serial.back().record.has_value());
    CHECK(serial.back().record->report.z.first_singular() == Certificate::Z2);
}

TEST_CASE("worker count honours the environment") {
    setenv("PCLAB_THREADS", "3", 1);
    CHECK(worker_count() == 3);
    unsetenv("PCLAB_THREADS");
    CHECK(worker_count() >= 1);
}

TEST_CASE("json round trips") {
    const Scalar s = Scalar::gaussian(-3, 7, 5, 2);
    CHECK(scalar_from_json(to_json(s)) == s);
    CHECK(scalar_from_json(json{{"num", 6}, {"den", -4}}) == Scalar::rational(-3, 2));
    CHECK(scalar_from_json(json(5)) == Scalar(5));
    const Scalar big(mpq_class("123456789012345678901234567890/7"));
    const json jb = to_json(big);
    CHECK(jb["re_num"].is_string());
    CHECK(scalar_from_json(jb) == big);
    CHECK_THROWS_AS(scalar_from_json(json{{"num", 1}, {"den", 0}}), Error);

    const Mat m{{Scalar(1), Scalar::rational(1, 2)}, {s, Scalar(0)}};
    CHECK(mat_from_json(to_json(m)) == m);
    CHECK_THROWS_AS(mat_from_json(json::parse("[[1,2],[3]]")), Error);

    Rng rng(63);
    const auto series = ls_mul(support::eps_power(2, -1), support::random_regular(rng, 2, 4));
    const json js = to_json(series);
    CHECK(js["nu"] == -1);
    CHECK(js["window"] == 3);
    CHECK(js["coeffs"].size() == 4);
    CHECK(agree_to_window(series_from_json(js), series));
    CHECK(to_json(LaurentSeries::constant(Mat::identity(2)))["window"].is_null());
}

TEST_CASE("report json has the versioned schema") {
    Rng rng(64);
    SampleSpec spec;
    const Instance inst = random_instance(rng, spec);
    const auto rec = verify_theorem2(inst.build(), inst.partition());
    const json j = to_json(rec);
    CHECK(j["schema"] == 1);
    CHECK(j["verdict"]["kind"] == "Confined");
    CHECK(j["verdict"]["time"] == 4);
    CHECK(j["z_dets"].size() == 3);
    CHECK(j["passed"] == true);
    CHECK(j["class_trace"].size() >= 4);
    const json t = to_json(rec.segment, inst.build().params);
    CHECK(t["states"].size() == rec.segment.states.size());
    for (const auto& w : t["residual_windows"]) {
        CHECK(w.get<int>() > 0);
    }
}

TEST_CASE("config parsing and validation") {
    const json verify = json::parse(R"({"schema":1,"mode":"verify","n":2,"r":1,"m":2,
        "alpha":[[0,0],[0,0]],
        "beta_prev":[[[1,0],[0,1]]],
        "beta_cur":[[[0,0],[0,1]],[[1,0],[0,0]]]})");
    const ExperimentConfig c = config_from_json(verify);
    CHECK(c.mode == Mode::Verify);
    CHECK(c.window == kDefaultWindow);
    CHECK(c.beta_cur.size() == 2);

    json bad = verify;
    bad["window"] = 3;
    CHECK_THROWS_AS(config_from_json(bad), Error);
    bad = verify;
    bad.erase("alpha");
    CHECK_THROWS_AS(config_from_json(bad), Error);
    bad = verify;
    bad["mode"] = "nope";
    CHECK_THROWS_AS(config_from_json(bad), Error);
    bad = verify;
    bad["schema"] = 2;
    CHECK_THROWS_AS(config_from_json(bad), Error);

    const json sample = json::parse(R"({"mode":"sample","n":2,"r":1,"trials":0})");
    CHECK_THROWS_AS(config_from_json(sample), Error);

    const json demo = json::parse(R"({"mode":"scalar-demo","m":2,"beta_m1":{"num":0,"den":1}})");
    CHECK_THROWS_AS(config_from_json(demo), Error);
    const json demo_ok = json::parse(R"({"mode":"scalar-demo","m":3,"beta_prev0":{"num":1,"den":2},"alpha":{"num":1,"den":1}})");
    const auto d = config_from_json(demo_ok);
    CHECK(d.beta_prev0 == Scalar::rational(1, 2));
    CHECK(d.alpha_scalar == Scalar(1));
}
