#include "pclab/json_io.hpp"

#include <limits>
#include <ostream>

#include "pclab/error.hpp"

namespace pclab {

namespace {

json int_to_json(const mpz_class& z) {
    if (mpz_fits_slong_p(z.get_mpz_t())) {
        return static_cast<std::int64_t>(z.get_si());
    }
    return z.get_str();
}

mpz_class int_from_json(const json& j, const char* what) {
    if (j.is_number_integer()) {
        mpz_class z;
        mpz_set_si(z.get_mpz_t(), static_cast<long>(j.get<std::int64_t>()));
        return z;
    }
    if (j.is_string()) {
        mpz_class z;
        if (z.set_str(j.get<std::string>(), 10) != 0) {
            throw Error(ErrorKind::Validation, std::string("bad integer string for ") + what);
        }
        return z;
    }
    throw Error(ErrorKind::Validation, std::string("expected integer for ") + what);
}

mpq_class q_from_json(const json& obj, const char* num_key, const char* den_key) {
    const mpz_class num = obj.contains(num_key) ? int_from_json(obj.at(num_key), num_key) : mpz_class(0);
    const mpz_class den = obj.contains(den_key) ? int_from_json(obj.at(den_key), den_key) : mpz_class(1);
    if (den == 0) {
        throw Error(ErrorKind::Validation, std::string("zero denominator in ") + den_key);
    }
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

} // namespace

json to_json(const Scalar& s) {
    return json{{"re_num", int_to_json(s.re().get_num())},
                {"re_den", int_to_json(s.re().get_den())},
                {"im_num", int_to_json(s.im().get_num())},
                {"im_den", int_to_json(s.im().get_den())}};
}

Scalar scalar_from_json(const json& j) {
    if (j.is_number_integer() || j.is_string()) {
        return Scalar(mpq_class(int_from_json(j, "scalar")), 0);
    }
    if (!j.is_object()) {
        throw Error(ErrorKind::Validation, "scalar must be an object or integer");
    }
    if (j.contains("num")) {
        return Scalar(q_from_json(j, "num", "den"), 0);
    }
    return Scalar(q_from_json(j, "re_num", "re_den"), q_from_json(j, "im_num", "im_den"));
}

json to_json(const Mat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            row.push_back(to_json(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat mat_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j.front().is_array() || j.front().empty()) {
        throw Error(ErrorKind::Validation, "matrix must be a nonempty array of rows");
    }
    const std::size_t rows = j.size();
    const std::size_t cols = j.front().size();
    Mat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            throw Error(ErrorKind::Validation, "ragged matrix rows");
        }
        for (std::size_t k = 0; k < cols; ++k) {
            m(i, k) = scalar_from_json(j[i][k]);
        }
    }
    return m;
}

json to_json(const LaurentSeries& s) {
    json coeffs = json::array();
    if (!s.is_zero()) {
        const long end = s.exact() ? s.nu() + static_cast<long>(s.coeffs().size()) : s.window();
        for (long k = s.nu(); k < end; ++k) {
            coeffs.push_back(to_json(s.coeff(static_cast<int>(k))));
        }
    }
    return json{{"n", s.n()},
                {"nu", s.nu() >= kExactWindow ? json(nullptr) : json(s.nu())},
                {"window", s.exact() ? json(nullptr) : json(s.window())},
                {"coeffs", std::move(coeffs)}};
}

LaurentSeries series_from_json(const json& j) {
    try {
        const auto n = j.at("n").get<std::size_t>();
        const int window = j.at("window").is_null() ? kExactWindow : j.at("window").get<int>();
        const auto& coeffs = j.at("coeffs");
        if (coeffs.empty()) {
            return LaurentSeries::zero(n, window);
        }
        std::vector<Mat> mats;
        for (const auto& c : coeffs) {
            mats.push_back(mat_from_json(c));
        }
        return LaurentSeries::from_coeffs(j.at("nu").get<int>(), std::move(mats), window);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Validation, std::string("bad series: ") + e.what());
    }
}

json to_json(const TrajectorySegment& seg, const ModelParams& params) {
    json states = json::array();
    for (const auto& s : seg.states) {
        states.push_back(to_json(s));
    }
    json out{{"m", seg.m}, {"states", std::move(states)}, {"residual_windows", seg.residual_windows(params)}};
    if (seg.failure) {
        out["failure"] = json{{"offset", seg.failure->offset},
                              {"kind", to_string(seg.failure->kind)},
                              {"message", seg.failure->message}};
    } else {
        out["failure"] = nullptr;
    }
    return out;
}

namespace {

json optional_mat(const std::optional<Mat>& m) { return m ? to_json(*m) : json(nullptr); }
json optional_scalar(const std::optional<Scalar>& s) { return s ? to_json(*s) : json(nullptr); }

} // namespace

json to_json(const ConfinementReport& rep) {
    json z{{"skipped", rep.z.skipped},
           {"z1", optional_mat(rep.z.z1)},
           {"z2", optional_mat(rep.z.z2)},
           {"z3", optional_mat(rep.z.z3)}};
    json z_dets = json::array({optional_scalar(rep.z.det1), optional_scalar(rep.z.det2),
                               optional_scalar(rep.z.det3)});
    json predicted;
    if (rep.predicted.valuations) {
        predicted = json{{"valuations", *rep.predicted.valuations}, {"not_generic", nullptr}};
    } else {
        predicted = json{{"valuations", nullptr}, {"not_generic", to_string(*rep.predicted.not_generic)}};
    }
    json measured = json::array();
    for (const auto& v : rep.measured.valuations) {
        measured.push_back(json{{"order", v.order}, {"exact", v.exact}});
    }
    json classes = json::array();
    for (const auto c : rep.measured.classes) {
        classes.push_back(to_string(c));
    }
    json verdict{{"kind", to_string(rep.verdict.kind)}, {"reason", rep.verdict.reason}};
    if (rep.verdict.kind == VerdictKind::Confined) {
        verdict["time"] = rep.verdict.time;
    } else {
        verdict["step"] = rep.verdict.step;
    }
    return json{{"schema", kSchemaVersion},
                {"n", rep.n},
                {"r", rep.r},
                {"m", rep.m},
                {"z", std::move(z)},
                {"z_dets", std::move(z_dets)},
                {"predicted_valuations", std::move(predicted)},
                {"measured_valuations", std::move(measured)},
                {"class_trace", std::move(classes)},
                {"verdict", std::move(verdict)}};
}

json to_json(const Theorem2Record& rec) {
    json out = to_json(rec.report);
    json checks = json::array();
    for (const auto& c : rec.checks) {
        checks.push_back(json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    out["checks"] = std::move(checks);
    out["passed"] = rec.all_passed();
    return out;
}

std::optional<Mode> parse_mode(const std::string& s) {
    if (s == "scalar-demo") {
        return Mode::ScalarDemo;
    }
    if (s == "verify") {
        return Mode::Verify;
    }
    if (s == "sample") {
        return Mode::Sample;
    }
    return std::nullopt;
}

namespace {

std::vector<Mat> mat_list(const json& j, const char* key) {
    if (!j.contains(key)) {
        return {};
    }
    if (!j.at(key).is_array()) {
        throw Error(ErrorKind::Validation, std::string(key) + " must be a list of matrices");
    }
    std::vector<Mat> out;
    for (const auto& m : j.at(key)) {
        out.push_back(mat_from_json(m));
    }
    return out;
}

} // namespace

ExperimentConfig config_from_json(const json& j, std::optional<Mode> mode_override) {
    if (!j.is_object()) {
        throw Error(ErrorKind::Validation, "config must be a JSON object");
    }
    ExperimentConfig c;
    try {
        if (j.contains("schema") && j.at("schema").get<int>() != kSchemaVersion) {
            throw Error(ErrorKind::Validation, "unsupported schema version");
        }
        if (mode_override) {
            c.mode = *mode_override;
        } else if (j.contains("mode")) {
            const auto mode = parse_mode(j.at("mode").get<std::string>());
            if (!mode) {
                throw Error(ErrorKind::Validation, "unknown mode " + j.at("mode").dump());
            }
            c.mode = *mode;
        } else {
            throw Error(ErrorKind::Validation, "config has no mode");
        }
        c.n = j.value("n", std::size_t{1});
        c.r = j.value("r", c.n);
        c.m = j.value("m", 2);
        c.window = j.value("window", kDefaultWindow);
        c.trials = j.value("trials", std::uint64_t{100});
        c.rng_seed = j.value("rng_seed", std::uint64_t{42});
        c.output_path = j.value("output_path", std::string{});
        c.scalar_locus = j.value("scalar_locus", false);
        if (j.contains("range")) {
            const auto& rg = j.at("range");
            c.range.num_lo = rg.value("num_lo", c.range.num_lo);
            c.range.num_hi = rg.value("num_hi", c.range.num_hi);
            c.range.den_lo = rg.value("den_lo", c.range.den_lo);
            c.range.den_hi = rg.value("den_hi", c.range.den_hi);
            c.range.complex = rg.value("complex", c.range.complex);
        }
        if (c.mode == Mode::ScalarDemo) {
            if (j.contains("beta_prev0")) {
                c.beta_prev0 = scalar_from_json(j.at("beta_prev0"));
            }
            if (j.contains("beta_m1")) {
                c.beta_m1 = scalar_from_json(j.at("beta_m1"));
            }
            if (j.contains("alpha")) {
                c.alpha_scalar = scalar_from_json(j.at("alpha"));
            }
        } else if (j.contains("alpha")) {
            c.alpha = mat_from_json(j.at("alpha"));
        }
        c.beta_prev = mat_list(j, "beta_prev");
        c.beta_cur = mat_list(j, "beta_cur");
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Validation, std::string("malformed config: ") + e.what());
    }
    validate(c);
    return c;
}

void validate(const ExperimentConfig& c) {
    auto fail = [](const std::string& what) { throw Error(ErrorKind::Validation, what); };
    if (c.window < 4) {
        fail("window must be at least 4");
    }
    if (c.m < 2) {
        fail("m must be at least 2");
    }
    if (c.n < 1 || c.r < 1 || c.r > c.n) {
        fail("need 1 <= r <= n");
    }
    switch (c.mode) {
    case Mode::ScalarDemo:
        if (c.beta_m1.is_zero()) {
            fail("beta_m1 must be nonzero");
        }
        break;
    case Mode::Verify:
        if (!c.alpha) {
            fail("verify needs alpha");
        }
        if (c.alpha->rows() != c.n || !c.alpha->square()) {
            fail("alpha must be n x n");
        }
        if (c.beta_prev.empty() || c.beta_cur.empty()) {
            fail("verify needs beta_prev and beta_cur coefficient lists");
        }
        for (const auto* list : {&c.beta_prev, &c.beta_cur}) {
            for (const auto& m : *list) {
                if (!m.square() || m.rows() != c.n) {
                    fail("initial coefficients must be n x n");
                }
            }
            if (static_cast<int>(list->size()) > c.window) {
                fail("more initial coefficients than the window holds");
            }
        }
        break;
    case Mode::Sample:
        if (c.trials < 1) {
            fail("trials must be at least 1");
        }
        if (c.range.den_lo < 1 || c.range.den_hi < c.range.den_lo || c.range.num_hi < c.range.num_lo) {
            fail("bad coefficient range");
        }
        if (c.scalar_locus && c.n != 1) {
            fail("scalar_locus needs n = 1");
        }
        break;
    }
}

void write_csv(std::ostream& os, const SampleStats& stats) {
    os << "trial,seed_offset,verdict,det_Z1,det_Z2,det_Z3,valuations,failing_step\n";
    auto det = [](const std::optional<Scalar>& s) { return s ? s->to_string() : std::string(); };
    for (const auto& t : stats.trials) {
        os << t.trial << ',' << t.seed_offset << ',' << to_string(t.category) << ',' << det(t.det_z1) << ','
           << det(t.det_z2) << ',' << det(t.det_z3) << ',' << t.valuations << ','
           << (t.failing_step ? std::to_string(*t.failing_step) : std::string()) << '\n';
    }
}

} // namespace pclab
