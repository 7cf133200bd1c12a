// Serial reference vs OpenMP path for the sampler and batch verification.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "pclab/json_io.hpp"

using namespace pclab;

namespace {

double time_it(const std::function<void()>& f, int reps) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void row(const char* name, double serial, double parallel, bool same) {
    std::printf("%-28s %10.3f %10.3f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
                same ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    const std::uint64_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 200;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 3;
    std::printf("workers: %d, trials: %llu, best of %d\n", worker_count(), static_cast<unsigned long long>(trials), reps);
    std::printf("%-28s %10s %10s %9s\n", "kernel", "serial s", "parallel s", "speedup");

    struct Shape {
        const char* name;
        std::size_t n, r;
        int m;
    };
    for (const Shape s : {Shape{"sample n=2 r=1 m=2", 2, 1, 2}, Shape{"sample n=3 r=2 m=3", 3, 2, 3}}) {
        SampleConfig cfg;
        cfg.spec.n = s.n;
        cfg.spec.r = s.r;
        cfg.spec.m = s.m;
        cfg.trials = trials;
        cfg.seed = 42;
        SampleStats a;
        SampleStats b;
        const double ts = time_it([&] { a = genericity_sample(cfg, Execution::Serial); }, reps);
        const double tp = time_it([&] { b = genericity_sample(cfg, Execution::Parallel); }, reps);
        std::ostringstream ca;
        std::ostringstream cb;
        write_csv(ca, a);
        write_csv(cb, b);
        row(s.name, ts, tp, ca.str() == cb.str());
    }

    Rng rng(7);
    std::vector<Instance> batch;
    SampleSpec spec;
    spec.n = 3;
    spec.r = 1;
    for (std::uint64_t i = 0; i < trials / 2; ++i) {
        spec.m = 2 + static_cast<int>(i % 3);
        batch.push_back(random_instance(rng, spec));
    }
    std::vector<BatchItem> a;
    std::vector<BatchItem> b;
    const double ts = time_it([&] { a = verify_batch(batch, Execution::Serial); }, reps);
    const double tp = time_it([&] { b = verify_batch(batch, Execution::Parallel); }, reps);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
        same = a[i].record.has_value() == b[i].record.has_value() &&
               (!a[i].record || to_json(*a[i].record) == to_json(*b[i].record));
    }
    row("verify_batch n=3 r=1", ts, tp, same);
    return same ? 0 : 1;
}
