#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pclab/json_io.hpp"

using namespace pclab;

namespace {

enum Exit : int { kOk = 0, kFailure = 1, kHypothesesVoid = 2, kUsage = 64 };

std::string format_series(const LaurentSeries& s, int terms = 4) {
    std::ostringstream os;
    if (s.is_zero()) {
        os << "O(eps^" << s.window() << ")";
        return os.str();
    }
    const int nu = s.nu();
    int shown = 0;
    for (int k = nu; shown < terms && (s.exact() ? k < nu + static_cast<int>(s.coeffs().size()) : k < s.window());
         ++k, ++shown) {
        const Scalar c = s.coeff(k)(0, 0);
        if (c.is_zero()) {
            continue;
        }
        if (os.tellp() > 0) {
            os << " + ";
        }
        os << '(' << c.to_string() << ")";
        if (k != 0) {
            os << " eps^" << k;
        }
    }
    if (!s.exact()) {
        os << " + O(eps^" << std::min(s.window(), nu + terms) << ")";
    }
    return os.str();
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Validation, std::string("malformed JSON in ") + path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw Error(ErrorKind::Io, "cannot write " + path);
    }
}

int cmd_scalar_demo(const ExperimentConfig& c) {
    const Mat alpha{{c.alpha_scalar}};
    InitialData data;
    data.beta_prev = {Mat{{c.beta_prev0}}};
    data.beta_cur = {Mat{{Scalar(0)}}, Mat{{c.beta_m1}}};
    const BlockPartition p(1, 1);
    const InitialState init = build_initial(data, p, ModelParams(alpha, c.m), c.window);
    TrajectorySegment seg;
    const ConfinementReport rep = analyze(init, p, &seg);

    std::cout << "m = " << c.m << ", beta_{m-1,0} = " << c.beta_prev0.to_string()
              << ", beta_{m,1} = " << c.beta_m1.to_string() << ", alpha = " << c.alpha_scalar.to_string() << '\n';
    for (int k = 0; k <= kConfinementTime && seg.has(k); ++k) {
        std::cout << "beta_{m+" << k << "} = " << format_series(seg.at(k)) << '\n';
    }
    const Scalar expected = Scalar::rational(c.m, c.m + 3) * c.beta_prev0 - Scalar::rational(2, c.m + 3) * c.alpha_scalar;
    std::cout << "m/(m+3) beta_{m-1,0} - 2/(m+3) alpha = " << expected.to_string() << '\n';
    if (seg.has(kConfinementTime)) {
        const auto& last = seg.at(kConfinementTime);
        if (last.window() <= 0) {
            std::cout << "beta_{m+4,0} is past the certified window (" << last.window() << ")\n";
        }
    }
    if (seg.has(kConfinementTime) && seg.at(kConfinementTime).window() > 0) {
        const auto& last = seg.at(kConfinementTime);
        const Scalar value = last.is_zero() || last.nu() > 0 ? Scalar(0) : last.coeff(0)(0, 0);
        std::cout << "beta_{m+4,0} = " << value.to_string() << (value == expected ? " (matches)" : " (MISMATCH)") << '\n';
    }
    std::cout << "verdict: " << to_string(rep.verdict.kind);
    if (rep.verdict.kind == VerdictKind::Confined) {
        std::cout << " at time " << rep.verdict.time;
    } else {
        std::cout << " (" << rep.verdict.reason << ")";
    }
    std::cout << '\n';
    return rep.verdict.kind == VerdictKind::Confined ? kOk : kFailure;
}

int cmd_verify(const ExperimentConfig& c) {
    InitialData data{c.beta_prev, c.beta_cur};
    const BlockPartition p(c.n, c.r);
    const ModelParams params(*c.alpha, c.m);
    const InitialState init = build_initial(data, p, params, c.window);
    const Theorem2Record rec = verify_theorem2(init, p);
    json out = to_json(rec);
    out["trajectory"] = to_json(rec.segment, init.params);
    out["similarity"] = to_json(init.similarity);
    write_text(c.output_path, out.dump(2) + "\n");
    for (const auto& chk : rec.checks) {
        std::cerr << (chk.passed ? "ok   " : "FAIL ") << chk.name;
        if (!chk.passed && !chk.detail.empty()) {
            std::cerr << ": " << chk.detail;
        }
        std::cerr << '\n';
    }
    std::cerr << "verdict: " << to_string(rec.report.verdict.kind) << '\n';
    return rec.all_passed() ? kOk : kFailure;
}

int cmd_sample(const ExperimentConfig& c) {
    SampleConfig cfg;
    cfg.spec.n = c.n;
    cfg.spec.r = c.r;
    cfg.spec.m = c.m;
    cfg.spec.window = c.window;
    cfg.spec.range = c.range;
    cfg.spec.scalar_locus = c.scalar_locus;
    cfg.trials = c.trials;
    cfg.seed = c.rng_seed;
    const SampleStats stats = genericity_sample(cfg);
    std::ostringstream csv;
    write_csv(csv, stats);
    write_text(c.output_path, csv.str());
    (c.output_path.empty() ? std::cerr : std::cout) << stats.summary() << '\n';
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Singularity confinement experiments for the matrix dPI recursion"};
    std::string mode_name;
    std::string config_path;
    std::optional<std::string> out_path;
    std::optional<std::uint64_t> seed;
    std::optional<long long> trials;
    std::optional<int> window;
    app.add_option("--mode", mode_name, "scalar-demo | verify | sample");
    app.add_option("--config", config_path, "JSON experiment config");
    app.add_option("--out", out_path, "output file (stdout if omitted)");
    app.add_option("--seed", seed, "sampler seed");
    app.add_option("--trials", trials, "sampler trial count");
    app.add_option("--window", window, "truncation window (>= 4)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        std::optional<Mode> mode;
        if (!mode_name.empty()) {
            mode = parse_mode(mode_name);
            if (!mode) {
                std::cerr << "error: unknown mode '" << mode_name << "'\n";
                return kUsage;
            }
        }
        ExperimentConfig c;
        if (!config_path.empty()) {
            c = config_from_json(read_json(config_path), mode);
        } else if (mode == Mode::ScalarDemo) {
            c.mode = Mode::ScalarDemo;
        } else {
            std::cerr << "error: --config is required for this mode\n";
            return kUsage;
        }
        if (out_path) {
            c.output_path = *out_path;
        }
        if (seed) {
            c.rng_seed = *seed;
        }
        if (trials) {
            if (*trials < 1) {
                throw Error(ErrorKind::Validation, "trials must be at least 1");
            }
            c.trials = static_cast<std::uint64_t>(*trials);
        }
        if (window) {
            c.window = *window;
        }
        validate(c);

        switch (c.mode) {
        case Mode::ScalarDemo:
            return cmd_scalar_demo(c);
        case Mode::Verify:
            return cmd_verify(c);
        case Mode::Sample:
            return cmd_sample(c);
        }
    } catch (const Error& e) {
        switch (e.kind()) {
        case ErrorKind::SingularD:
        case ErrorKind::DegenerateData:
        case ErrorKind::RankMismatch:
            std::cerr << "hypotheses void: " << e.what() << '\n';
            return kHypothesesVoid;
        case ErrorKind::Validation:
        case ErrorKind::Io:
        case ErrorKind::BadPartition:
        case ErrorKind::DimensionMismatch:
        case ErrorKind::NonSquare:
            std::cerr << "error: " << e.what() << '\n';
            return kUsage;
        default:
            std::cerr << "analysis failed: " << e.what() << '\n';
            return kFailure;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
