#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pclab/confinement.hpp"
#include "pclab/dynamics.hpp"

namespace pclab {

/// Portable uniform integers on top of mt19937_64 (std distributions are
/// implementation-defined, which would make CSV output platform dependent).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::int64_t uniform(std::int64_t lo, std::int64_t hi);

private:
    std::mt19937_64 engine_;
};

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) noexcept;

/// Entries: integer numerator uniform in [num_lo, num_hi], denominator in
/// [den_lo, den_hi], real and imaginary parts drawn independently.
struct CoefficientRange {
    std::int64_t num_lo = -9;
    std::int64_t num_hi = 9;
    std::int64_t den_lo = 1;
    std::int64_t den_hi = 9;
    bool complex = true;
};

Scalar random_scalar(Rng& rng, const CoefficientRange& range);
Mat random_mat(Rng& rng, std::size_t rows, std::size_t cols, const CoefficientRange& range);

struct SampleSpec {
    std::size_t n = 2;
    std::size_t r = 1;
    int m = 2;
    int window = kDefaultWindow;
    CoefficientRange range;
    /// Scalar mode only: alpha = (m/2) beta_{m-1,0}, the non-confinement locus.
    bool scalar_locus = false;
};

struct Instance {
    std::size_t n = 0;
    std::size_t r = 0;
    int m = 2;
    int window = kDefaultWindow;
    InitialData data;
    Mat alpha;

    BlockPartition partition() const { return BlockPartition(n, r); }
    ModelParams params() const { return ModelParams(alpha, m); }
    InitialState build() const { return build_initial(data, partition(), params(), window); }
};

/// Random data already in normalized form: beta_{m,0} has zero first r rows.
Instance random_instance(Rng& rng, const SampleSpec& spec);

/// Instance on the vanishing locus of one certificate, obtained by solving
/// the certificate formula for D_{m-1,0} (and alpha_22 for Z2, Z3) while the
/// preceding certificates stay invertible. Requires r < n.
Instance engineer_witness(Rng& rng, const SampleSpec& spec, Certificate which);

enum class TrialCategory {
    Confined,
    NotConfinedZ1,
    NotConfinedZ2,
    NotConfinedZ3,
    NotConfinedM4,
    NotConfinedOther,
    Indeterminate,
    HypothesesVoid,
};
inline constexpr std::size_t kTrialCategories = 8;
std::string_view to_string(TrialCategory c) noexcept;

struct TrialRecord {
    std::uint64_t trial = 0;
    std::uint64_t seed_offset = 0;
    TrialCategory category = TrialCategory::HypothesesVoid;
    std::string verdict;
    std::optional<Scalar> det_z1, det_z2, det_z3;
    std::string valuations;  ///< "-1;-1;1;0", ">=" marks lower bounds
    std::optional<int> failing_step;
    std::string detail;
};

struct SampleConfig {
    SampleSpec spec;
    std::uint64_t trials = 100;
    std::uint64_t seed = 42;
};

struct SampleStats {
    std::vector<TrialRecord> trials;  ///< ordered by trial index
    std::vector<std::size_t> counts = std::vector<std::size_t>(kTrialCategories, 0);

    std::size_t count(TrialCategory c) const { return counts[static_cast<std::size_t>(c)]; }
    std::size_t failures() const;  ///< NotConfined of any kind plus Indeterminate
    std::vector<const TrialRecord*> failing_instances() const;
    std::string summary() const;
};

enum class Execution { Serial, Parallel };

/// Classifies one instance the way a sampler trial does.
TrialRecord classify_instance(const Instance& inst);

/// Deterministic in (config); the parallel path produces the same records as
/// the serial one. Thread count honours PCLAB_THREADS.
SampleStats genericity_sample(const SampleConfig& config, Execution exec = Execution::Parallel);

struct BatchItem {
    std::optional<Theorem2Record> record;
    std::string error;  ///< set when the instance could not be analysed
    std::optional<ErrorKind> error_kind;
};

/// verify_theorem2 over a batch of instances, results in input order.
std::vector<BatchItem> verify_batch(const std::vector<Instance>& instances, Execution exec = Execution::Parallel);

/// Worker count for the parallel paths: PCLAB_THREADS if set and positive,
/// otherwise the OpenMP default.
int worker_count();

} // namespace pclab
