#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pclab/confinement.hpp"
#include "pclab/sampler.hpp"
#include "pclab/series.hpp"

namespace pclab {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Wire formats. Integers that do not fit in 64 bits are written as decimal
// strings; readers accept both.
//   Scalar         {re_num, re_den, im_num, im_den}   (readers also take {num, den} or an integer)
//   Mat            [[Scalar, ...], ...]               row-major
//   LaurentSeries  {n, nu, window, coeffs: [Mat...]}  window null when exact
json to_json(const Scalar& s);
json to_json(const Mat& m);
json to_json(const LaurentSeries& s);
json to_json(const TrajectorySegment& seg, const ModelParams& params);
json to_json(const ConfinementReport& rep);
json to_json(const Theorem2Record& rec);

Scalar scalar_from_json(const json& j);
Mat mat_from_json(const json& j);
LaurentSeries series_from_json(const json& j);

enum class Mode { ScalarDemo, Verify, Sample };

struct ExperimentConfig {
    Mode mode = Mode::Verify;
    std::size_t n = 1;
    std::size_t r = 1;
    int m = 2;
    int window = kDefaultWindow;
    std::optional<Mat> alpha;
    std::vector<Mat> beta_prev;
    std::vector<Mat> beta_cur;
    // scalar-demo inputs
    Scalar beta_prev0{1};
    Scalar beta_m1{1};
    Scalar alpha_scalar{0};
    // sampler inputs
    std::uint64_t trials = 100;
    std::uint64_t rng_seed = 42;
    CoefficientRange range;
    bool scalar_locus = false;
    std::string output_path;
};

std::optional<Mode> parse_mode(const std::string& s);

/// Throws Validation on malformed documents or missing mode-specific fields.
ExperimentConfig config_from_json(const json& j, std::optional<Mode> mode_override = std::nullopt);
void validate(const ExperimentConfig& c);

/// CSV with header trial,seed_offset,verdict,det_Z1,det_Z2,det_Z3,valuations,failing_step.
void write_csv(std::ostream& os, const SampleStats& stats);

} // namespace pclab
