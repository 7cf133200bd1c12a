#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pclab/block.hpp"
#include "pclab/dynamics.hpp"
#include "pclab/series.hpp"

namespace pclab {

/// Offsets m+1 .. m+4 after the zero at m.
inline constexpr int kConfinementTime = 4;

enum class Certificate { Z1, Z2, Z3 };
std::string_view to_string(Certificate c) noexcept;

/// Genericity certificates built from the order-0 blocks of the initial
/// data. Evaluation stops at the first singular certificate: Z2 needs Z1
/// invertible and Z3 needs both.
struct ZTriple {
    bool skipped = false;  ///< maximal-rank case: the blocks are empty
    std::optional<Mat> z1, z2, z3;
    std::optional<Scalar> det1, det2, det3;

    /// First certificate whose determinant vanishes.
    std::optional<Certificate> first_singular() const;
};

/// Throws SingularD when det D_{m,0} == 0.
ZTriple compute_Z(const Mat& beta_prev0, const Mat& beta_cur0, const BlockPartition& p,
                  const ModelParams& params);
ZTriple compute_Z(const InitialState& init, const BlockPartition& p);

/// The same certificates read from the order-0 coefficients of an iterated
/// segment: D_{m+k,0} + D_{m,0}^-1 C_{m,0} B_{m+k,0} for k = 1, 2 and
/// D_{m+3,0}. Entries are empty where the segment is too short.
struct ZFromTrajectory {
    std::optional<Mat> z1, z2, z3;
};
ZFromTrajectory z_from_trajectory(const TrajectorySegment& seg, const BlockPartition& p);

/// S_D(beta_m)_1 = A_{m,1} - B_{m,1} D_{m,0}^-1 C_{m,0}.
Mat schur_lead(const LaurentSeries& beta_cur, const BlockPartition& p);

struct Prediction {
    std::optional<std::array<int, 4>> valuations;  ///< (-r, -r, r, 0) when generic
    std::optional<Certificate> not_generic;
};

Prediction predict(const ZTriple& z, const BlockPartition& p);

struct Measurement {
    std::vector<ValuationBound> valuations;  ///< det valuations of beta_{m+1..}
    std::vector<SeriesClass> classes;
    std::optional<StepFailure> failure;
};

Measurement measure(const TrajectorySegment& seg, const BlockPartition& p);

enum class VerdictKind { Confined, NotConfined, Indeterminate };
std::string_view to_string(VerdictKind k) noexcept;

struct Verdict {
    VerdictKind kind = VerdictKind::Indeterminate;
    int time = 0;             ///< confinement time when Confined
    int step = 0;             ///< offset where the pattern broke or became undecidable
    std::string reason;
};

Verdict verdict(const Prediction& predicted, const Measurement& measured, const BlockPartition& p);

struct ConfinementReport {
    std::size_t n = 0;
    std::size_t r = 0;
    int m = 2;
    ZTriple z;
    Prediction predicted;
    Measurement measured;
    Verdict verdict;
};

/// Certificates, prediction, forward run to m+4, measurement and verdict.
/// Throws SingularD when det D_{m,0} == 0.
ConfinementReport analyze(const InitialState& init, const BlockPartition& p,
                          TrajectorySegment* segment_out = nullptr);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Theorem2Record {
    ConfinementReport report;
    TrajectorySegment segment;
    std::vector<CheckResult> checks;

    bool all_passed() const;
    const CheckResult* find(std::string_view name) const;
};

/// Runs the certificates, the forward trajectory to m+4 and every structural
/// fixture that applies, and records one check per biconditional or
/// identity. Throws SingularD when det D_{m,0} == 0.
Theorem2Record verify_theorem2(const InitialState& init, const BlockPartition& p);

/// Four backward steps from (beta_{m+4}, beta_{m+3}); returns the recovered
/// (beta_{m-1}, beta_m).
std::pair<LaurentSeries, LaurentSeries> run_backward(const TrajectorySegment& seg, const ModelParams& params);

} // namespace pclab
