#include "pclab/sampler.hpp"

#include <cstdlib>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pclab/error.hpp"

namespace pclab {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x = 0;
    do {
        x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) noexcept {
    // splitmix64 finalizer over a golden-ratio stride
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (trial + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Scalar random_scalar(Rng& rng, const CoefficientRange& range) {
    const auto re_num = rng.uniform(range.num_lo, range.num_hi);
    const auto re_den = rng.uniform(range.den_lo, range.den_hi);
    if (!range.complex) {
        return Scalar::rational(re_num, re_den);
    }
    const auto im_num = rng.uniform(range.num_lo, range.num_hi);
    const auto im_den = rng.uniform(range.den_lo, range.den_hi);
    return Scalar::gaussian(re_num, re_den, im_num, im_den);
}

Mat random_mat(Rng& rng, std::size_t rows, std::size_t cols, const CoefficientRange& range) {
    Mat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m(i, j) = random_scalar(rng, range);
        }
    }
    return m;
}

Instance random_instance(Rng& rng, const SampleSpec& spec) {
    const BlockPartition p(spec.n, spec.r);  // validates n, r
    if (spec.scalar_locus && spec.n != 1) {
        throw Error(ErrorKind::Validation, "the scalar locus option needs n = 1");
    }
    Instance inst;
    inst.n = spec.n;
    inst.r = spec.r;
    inst.m = spec.m;
    inst.window = spec.window;
    const std::size_t n = spec.n;
    for (int k = 0; k < spec.window; ++k) {
        inst.data.beta_prev.push_back(random_mat(rng, n, n, spec.range));
    }
    Mat cur0(n, n);
    if (!p.maximal()) {
        cur0.set_block(spec.r, 0, random_mat(rng, p.rest(), n, spec.range));
    }
    inst.data.beta_cur.push_back(std::move(cur0));
    for (int k = 1; k < spec.window; ++k) {
        inst.data.beta_cur.push_back(random_mat(rng, n, n, spec.range));
    }
    if (spec.scalar_locus) {
        inst.alpha = Scalar(mpq_class(spec.m, 2)) * inst.data.beta_prev.front();
    } else {
        inst.alpha = random_mat(rng, n, n, spec.range);
    }
    return inst;
}

namespace {

Mat random_invertible(Rng& rng, std::size_t n, const CoefficientRange& range) {
    for (;;) {
        Mat w = random_mat(rng, n, n, range);
        if (!det(w).is_zero()) {
            return w;
        }
    }
}

// Nonzero singular matrix when possible (rank s - 1), zero for s == 1.
Mat random_singular(Rng& rng, std::size_t s, const CoefficientRange& range) {
    if (s == 1) {
        return Mat(1, 1);
    }
    return random_mat(rng, s, s - 1, range) * random_mat(rng, s - 1, s, range);
}

} // namespace

Instance engineer_witness(Rng& rng, const SampleSpec& spec, Certificate which) {
    const BlockPartition p(spec.n, spec.r);
    if (p.maximal()) {
        throw Error(ErrorKind::BadPartition, "certificates need r < n");
    }
    for (;;) {
        Instance inst = random_instance(rng, spec);
        const std::size_t r = spec.r;
        const std::size_t s = p.rest();
        Mat& prev0 = inst.data.beta_prev.front();
        const Blocks cur = blocks(inst.data.beta_cur.front(), p);
        if (det(cur.d).is_zero()) {
            continue;
        }
        const Mat d_inv = inverse(cur.d);
        const Mat coupling = d_inv * cur.c;
        const Scalar m(spec.m);
        const Mat k = random_singular(rng, s, spec.range);

        // Solving Z1 = target for D_{m-1,0}.
        auto set_prev_d = [&](const Mat& target_z1) {
            const Blocks prev = blocks(prev0, p);
            const Blocks alpha = blocks(inst.alpha, p);
            prev0.set_block(r, r, m * d_inv - cur.d - alpha.d - coupling * (prev.b + alpha.b) - target_z1);
        };
        // Z2 = (m+1) Z1^-1 - Z1 - D - alpha_22 - D^-1 C alpha_12 once Z1 is fixed.
        auto set_alpha_22 = [&](const Mat& z1, const Mat& target_z2) {
            const Blocks alpha = blocks(inst.alpha, p);
            inst.alpha.set_block(r, r, Scalar(spec.m + 1) * inverse(z1) - z1 - cur.d - coupling * alpha.b -
                                           target_z2);
        };

        switch (which) {
        case Certificate::Z1:
            set_prev_d(k);
            break;
        case Certificate::Z2: {
            const Mat w1 = random_invertible(rng, s, spec.range);
            set_alpha_22(w1, k);
            set_prev_d(w1);
            break;
        }
        case Certificate::Z3: {
            // Z3 = D - (m+1) Z1^-1 + (m+2) Z2^-1 = K  <=>  Z2 = (m+2) (K - D + (m+1) Z1^-1)^-1
            const Mat w1 = random_invertible(rng, s, spec.range);
            const Mat t = k - cur.d + Scalar(spec.m + 1) * inverse(w1);
            if (det(t).is_zero()) {
                continue;
            }
            const Mat w2 = Scalar(spec.m + 2) * inverse(t);
            set_alpha_22(w1, w2);
            set_prev_d(w1);
            break;
        }
        }
        return inst;
    }
}

std::string_view to_string(TrialCategory c) noexcept {
    switch (c) {
    case TrialCategory::Confined: return "Confined";
    case TrialCategory::NotConfinedZ1: return "NotConfined(Z1)";
    case TrialCategory::NotConfinedZ2: return "NotConfined(Z2)";
    case TrialCategory::NotConfinedZ3: return "NotConfined(Z3)";
    case TrialCategory::NotConfinedM4: return "NotConfined(m+4)";
    case TrialCategory::NotConfinedOther: return "NotConfined(other)";
    case TrialCategory::Indeterminate: return "Indeterminate";
    case TrialCategory::HypothesesVoid: return "HypothesesVoid";
    }
    return "HypothesesVoid";
}

std::size_t SampleStats::failures() const {
    return count(TrialCategory::NotConfinedZ1) + count(TrialCategory::NotConfinedZ2) +
           count(TrialCategory::NotConfinedZ3) + count(TrialCategory::NotConfinedM4) +
           count(TrialCategory::NotConfinedOther) + count(TrialCategory::Indeterminate);
}

std::vector<const TrialRecord*> SampleStats::failing_instances() const {
    std::vector<const TrialRecord*> out;
    for (const auto& t : trials) {
        if (t.category != TrialCategory::Confined) {
            out.push_back(&t);
        }
    }
    return out;
}

std::string SampleStats::summary() const {
    std::ostringstream os;
    os << "trials=" << trials.size();
    for (std::size_t c = 0; c < kTrialCategories; ++c) {
        os << ' ' << to_string(static_cast<TrialCategory>(c)) << '=' << counts[c];
    }
    return os.str();
}

namespace {

std::string format_valuations(const Measurement& meas) {
    std::string out;
    for (std::size_t k = 0; k < meas.valuations.size(); ++k) {
        const auto& v = meas.valuations[k];
        out += (k ? ";" : "") + std::string(v.exact ? "" : ">=") + std::to_string(v.order);
    }
    return out;
}

TrialCategory categorize(const ConfinementReport& rep) {
    switch (rep.verdict.kind) {
    case VerdictKind::Confined: return TrialCategory::Confined;
    case VerdictKind::Indeterminate: return TrialCategory::Indeterminate;
    case VerdictKind::NotConfined: break;
    }
    if (rep.predicted.not_generic) {
        switch (*rep.predicted.not_generic) {
        case Certificate::Z1: return TrialCategory::NotConfinedZ1;
        case Certificate::Z2: return TrialCategory::NotConfinedZ2;
        case Certificate::Z3: return TrialCategory::NotConfinedZ3;
        }
    }
    return rep.verdict.step == kConfinementTime ? TrialCategory::NotConfinedM4 : TrialCategory::NotConfinedOther;
}

} // namespace

TrialRecord classify_instance(const Instance& inst) {
    TrialRecord rec;
    try {
        const InitialState init = inst.build();
        const ConfinementReport rep = analyze(init, inst.partition());
        rec.category = categorize(rep);
        rec.verdict = std::string(to_string(rep.verdict.kind));
        rec.det_z1 = rep.z.det1;
        rec.det_z2 = rep.z.det2;
        rec.det_z3 = rep.z.det3;
        rec.valuations = format_valuations(rep.measured);
        if (rep.verdict.kind != VerdictKind::Confined) {
            rec.failing_step = rep.verdict.step;
        }
        rec.detail = rep.verdict.reason;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularD && e.kind() != ErrorKind::DegenerateData &&
            e.kind() != ErrorKind::RankMismatch) {
            throw;
        }
        rec.category = TrialCategory::HypothesesVoid;
        rec.verdict = "HypothesesVoid";
        rec.detail = e.what();
    }
    return rec;
}

int worker_count() {
    if (const char* env = std::getenv("PCLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) {
            return static_cast<int>(v);
        }
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

TrialRecord run_trial(const SampleConfig& config, std::uint64_t trial) {
    Rng rng(trial_seed(config.seed, trial));
    TrialRecord rec = classify_instance(random_instance(rng, config.spec));
    rec.trial = trial;
    rec.seed_offset = trial;
    return rec;
}

void tally(SampleStats& stats) {
    for (const auto& t : stats.trials) {
        ++stats.counts[static_cast<std::size_t>(t.category)];
    }
}

} // namespace

SampleStats genericity_sample(const SampleConfig& config, Execution exec) {
    if (config.trials < 1) {
        throw Error(ErrorKind::Validation, "trials must be at least 1");
    }
    SampleStats stats;
    stats.trials.resize(config.trials);
    const auto count = static_cast<std::int64_t>(config.trials);
    if (exec == Execution::Serial) {
        for (std::int64_t t = 0; t < count; ++t) {
            stats.trials[static_cast<std::size_t>(t)] = run_trial(config, static_cast<std::uint64_t>(t));
        }
    } else {
        // Each trial owns its RNG stream and output slot; the merge is the
        // slot order, so results match the serial loop exactly.
        std::string failure;
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
        for (std::int64_t t = 0; t < count; ++t) {
            try {
                stats.trials[static_cast<std::size_t>(t)] = run_trial(config, static_cast<std::uint64_t>(t));
            } catch (const std::exception& e) {
#pragma omp critical(pclab_sampler_failure)
                if (failure.empty()) {
                    failure = e.what();
                }
            }
        }
        if (!failure.empty()) {
            throw Error(ErrorKind::Validation, "trial failed: " + failure);
        }
    }
    tally(stats);
    return stats;
}

namespace {

BatchItem verify_one(const Instance& inst) {
    BatchItem item;
    try {
        item.record = verify_theorem2(inst.build(), inst.partition());
    } catch (const Error& e) {
        item.error = e.what();
        item.error_kind = e.kind();
    }
    return item;
}

} // namespace

std::vector<BatchItem> verify_batch(const std::vector<Instance>& instances, Execution exec) {
    std::vector<BatchItem> out(instances.size());
    const auto count = static_cast<std::int64_t>(instances.size());
    if (exec == Execution::Serial) {
        for (std::int64_t i = 0; i < count; ++i) {
            out[static_cast<std::size_t>(i)] = verify_one(instances[static_cast<std::size_t>(i)]);
        }
        return out;
    }
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (std::int64_t i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = verify_one(instances[static_cast<std::size_t>(i)]);
    }
    return out;
}

} // namespace pclab
