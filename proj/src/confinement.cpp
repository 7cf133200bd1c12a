#include "pclab/confinement.hpp"

#include <sstream>

#include "pclab/error.hpp"

namespace pclab {

std::string_view to_string(Certificate c) noexcept {
    switch (c) {
    case Certificate::Z1: return "Z1";
    case Certificate::Z2: return "Z2";
    case Certificate::Z3: return "Z3";
    }
    return "Z?";
}

std::string_view to_string(VerdictKind k) noexcept {
    switch (k) {
    case VerdictKind::Confined: return "Confined";
    case VerdictKind::NotConfined: return "NotConfined";
    case VerdictKind::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

std::optional<Certificate> ZTriple::first_singular() const {
    if (skipped) {
        return std::nullopt;
    }
    if (det1 && det1->is_zero()) {
        return Certificate::Z1;
    }
    if (det2 && det2->is_zero()) {
        return Certificate::Z2;
    }
    if (det3 && det3->is_zero()) {
        return Certificate::Z3;
    }
    return std::nullopt;
}

namespace {

Mat d_inverse(const Blocks& cur0) {
    if (det(cur0.d).is_zero()) {
        throw Error(ErrorKind::SingularD, "det D_{m,0} = 0: certificate hypotheses are void");
    }
    return inverse(cur0.d);
}

} // namespace

ZTriple compute_Z(const Mat& beta_prev0, const Mat& beta_cur0, const BlockPartition& p,
                  const ModelParams& params) {
    ZTriple z;
    if (p.maximal()) {
        z.skipped = true;
        return z;
    }
    const Blocks prev = blocks(beta_prev0, p);
    const Blocks cur = blocks(beta_cur0, p);
    const Blocks alpha = blocks(params.alpha, p);
    const Mat d_inv = d_inverse(cur);
    const Scalar m(params.m);
    const Mat coupling = d_inv * cur.c;  // D_{m,0}^-1 C_{m,0}

    Mat z1 = m * d_inv - prev.d - cur.d - alpha.d - coupling * (prev.b + alpha.b);
    z.det1 = det(z1);
    z.z1 = z1;
    if (z.det1->is_zero()) {
        return z;
    }
    const Mat z1_inv = inverse(z1);

    Mat z2 = Scalar(params.m + 1) * z1_inv + coupling * prev.b - m * d_inv + prev.d;
    z.det2 = det(z2);
    z.z2 = z2;
    if (z.det2->is_zero()) {
        return z;
    }
    const Mat z2_inv = inverse(z2);

    z.z3 = cur.d - Scalar(params.m + 1) * z1_inv + Scalar(params.m + 2) * z2_inv;
    z.det3 = det(*z.z3);
    return z;
}

ZTriple compute_Z(const InitialState& init, const BlockPartition& p) {
    return compute_Z(init.beta_prev.coeff(0), init.beta_cur.coeff(0), p, init.params);
}

ZFromTrajectory z_from_trajectory(const TrajectorySegment& seg, const BlockPartition& p) {
    ZFromTrajectory out;
    if (p.maximal() || !seg.has(0)) {
        return out;
    }
    const Blocks cur = blocks(seg.at(0).coeff(0), p);
    const Mat coupling = d_inverse(cur) * cur.c;
    auto order0 = [&](int offset) -> std::optional<Blocks> {
        if (!seg.has(offset) || seg.at(offset).window() <= 0) {
            return std::nullopt;
        }
        return blocks(seg.at(offset).coeff(0), p);
    };
    if (auto b = order0(1)) {
        out.z1 = b->d + coupling * b->b;
    }
    if (auto b = order0(2)) {
        out.z2 = b->d + coupling * b->b;
    }
    if (auto b = order0(3)) {
        out.z3 = b->d;
    }
    return out;
}

Mat schur_lead(const LaurentSeries& beta_cur, const BlockPartition& p) {
    const Blocks k0 = blocks(beta_cur.coeff(0), p);
    const Blocks k1 = blocks(beta_cur.coeff(1), p);
    return k1.a - k1.b * d_inverse(k0) * k0.c;
}

Prediction predict(const ZTriple& z, const BlockPartition& p) {
    Prediction out;
    if (auto bad = z.first_singular()) {
        out.not_generic = *bad;
        return out;
    }
    const int r = static_cast<int>(p.r());
    out.valuations = std::array<int, 4>{-r, -r, r, 0};
    return out;
}

Measurement measure(const TrajectorySegment& seg, const BlockPartition& p) {
    Measurement out;
    for (int k = 1; k <= kConfinementTime && seg.has(k); ++k) {
        out.valuations.push_back(det_valuation_bound(seg.at(k)));
        out.classes.push_back(classify(seg.at(k), p));
    }
    out.failure = seg.failure;
    return out;
}

namespace {

std::string describe(const ValuationBound& v) {
    return (v.exact ? "" : ">= ") + std::to_string(v.order);
}

} // namespace

Verdict verdict(const Prediction& predicted, const Measurement& measured, const BlockPartition& p) {
    const int r = static_cast<int>(p.r());
    const std::array<int, 4> expected{-r, -r, r, 0};
    const std::array<SeriesClass, 4> chain{SeriesClass::PoleLRing, SeriesClass::PoleLRing,
                                           SeriesClass::KRing, SeriesClass::Regular};
    std::string prefix;
    if (predicted.not_generic) {
        prefix = std::string(to_string(*predicted.not_generic)) + " singular; ";
    }

    Verdict v;
    std::optional<int> undecided;
    for (int k = 1; k <= kConfinementTime; ++k) {
        const auto idx = static_cast<std::size_t>(k - 1);
        if (idx >= measured.valuations.size()) {
            if (!undecided) {
                undecided = k;
            }
            break;
        }
        const ValuationBound& got = measured.valuations[idx];
        const int want = expected[idx];
        const bool broken = got.exact ? got.order != want : got.order > want;
        if (broken) {
            v.kind = VerdictKind::NotConfined;
            v.step = k;
            v.reason = prefix + "det valuation at m+" + std::to_string(k) + " is " + describe(got) +
                       ", pattern needs " + std::to_string(want);
            return v;
        }
        if (!got.exact && !undecided) {
            undecided = k;
        }
    }
    if (undecided) {
        v.kind = VerdictKind::Indeterminate;
        v.step = *undecided;
        std::ostringstream os;
        os << prefix << "cannot certify m+" << *undecided;
        if (measured.failure) {
            os << " (" << measured.failure->message << ")";
        }
        v.reason = os.str();
        return v;
    }
    for (int k = 1; k <= kConfinementTime; ++k) {
        const auto idx = static_cast<std::size_t>(k - 1);
        if (measured.classes[idx] != chain[idx]) {
            v.kind = VerdictKind::NotConfined;
            v.step = k;
            v.reason = "class at m+" + std::to_string(k) + " is " +
                       std::string(to_string(measured.classes[idx])) + ", chain needs " +
                       std::string(to_string(chain[idx]));
            return v;
        }
    }
    // Confinement time: first state after the zero with neither pole nor zero.
    int time = 0;
    for (int k = 1; k <= kConfinementTime; ++k) {
        const auto idx = static_cast<std::size_t>(k - 1);
        const bool regular = measured.classes[idx] == SeriesClass::Regular ||
                             measured.classes[idx] == SeriesClass::KRing;
        if (regular && measured.valuations[idx].order == 0) {
            time = k;
            break;
        }
    }
    if (time != kConfinementTime) {
        v.kind = VerdictKind::NotConfined;
        v.step = time;
        v.reason = "confinement time " + std::to_string(time);
        return v;
    }
    v.kind = VerdictKind::Confined;
    v.time = time;
    v.reason = "confined";
    return v;
}

bool Theorem2Record::all_passed() const {
    for (const auto& c : checks) {
        if (!c.passed) {
            return false;
        }
    }
    return true;
}

const CheckResult* Theorem2Record::find(std::string_view name) const {
    for (const auto& c : checks) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

std::pair<LaurentSeries, LaurentSeries> run_backward(const TrajectorySegment& seg, const ModelParams& params) {
    const int m = seg.m;
    LaurentSeries next = seg.at(4);
    LaurentSeries cur = seg.at(3);
    for (int n_index = m + 3; n_index >= m; --n_index) {
        LaurentSeries prev = step_backward(n_index, next, cur, params);
        next = std::move(cur);
        cur = std::move(prev);
    }
    // cur = beta_{m-1}, next = beta_m
    return {cur, next};
}

namespace {

// Certified answer to "is the det valuation at m+k equal to target?".
std::optional<bool> valuation_equals(const Measurement& meas, int k, int target) {
    const auto idx = static_cast<std::size_t>(k - 1);
    if (idx >= meas.valuations.size()) {
        return std::nullopt;
    }
    const auto& v = meas.valuations[idx];
    if (v.exact) {
        return v.order == target;
    }
    if (v.order > target) {
        return false;
    }
    return std::nullopt;
}

CheckResult biconditional(std::string name, const Scalar& certificate_det, const Measurement& meas,
                          int k, int target) {
    const bool nonzero = !certificate_det.is_zero();
    const auto got = valuation_equals(meas, k, target);
    CheckResult c{std::move(name), false, {}};
    std::ostringstream os;
    os << "det=" << certificate_det << ", valuation at m+" << k << " ";
    if (!got) {
        os << "undecidable within window";
    } else {
        c.passed = *got == nonzero;
        os << (*got ? "== " : "!= ") << target;
    }
    c.detail = os.str();
    return c;
}

CheckResult equality(std::string name, const std::optional<Mat>& lhs, const Mat& rhs) {
    CheckResult c{std::move(name), false, {}};
    if (!lhs) {
        c.detail = "not available from trajectory";
        return c;
    }
    c.passed = *lhs == rhs;
    if (!c.passed) {
        std::ostringstream os;
        os << "got " << *lhs << ", expected " << rhs;
        c.detail = os.str();
    }
    return c;
}

template <class F>
std::optional<Mat> try_read(F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InsufficientTruncation) {
            return std::nullopt;
        }
        throw;
    }
}

void maximal_rank_checks(Theorem2Record& rec, const InitialState& init, const Measurement& meas) {
    const auto& seg = rec.segment;
    const int m = init.params.m;
    const Mat b1 = init.beta_cur.coeff(1);
    const Mat prev0 = init.beta_prev.coeff(0);
    const Mat& alpha = init.params.alpha;
    const Mat b1_inv = inverse(b1);
    const Scalar ms(m);

    auto coeff_at = [&](int offset, int order) -> std::optional<Mat> {
        if (!seg.has(offset)) {
            return std::nullopt;
        }
        return try_read([&] { return seg.at(offset).coeff(order); });
    };
    rec.checks.push_back(equality("pole at m+1", coeff_at(1, -1), ms * b1_inv));
    rec.checks.push_back(equality("pole at m+2", coeff_at(2, -1), -(ms * b1_inv)));
    rec.checks.push_back(
        equality("zero at m+3", coeff_at(3, 1), Scalar(mpq_class(-(m + 3), m)) * b1));
    rec.checks.push_back(equality("value at m+4", coeff_at(4, 0),
                                  Scalar(mpq_class(m, m + 3)) * prev0 -
                                      Scalar(mpq_class(2, m + 3)) * alpha));
    const Scalar locus = det(ms * prev0 - Scalar(2) * alpha);
    rec.checks.push_back(biconditional("m+4 locus biconditional", locus, meas, 4, 0));
}

} // namespace

ConfinementReport analyze(const InitialState& init, const BlockPartition& p,
                          TrajectorySegment* segment_out) {
    ConfinementReport report;
    report.n = p.n();
    report.r = p.r();
    report.m = init.params.m;
    report.z = compute_Z(init, p);
    report.predicted = predict(report.z, p);
    TrajectorySegment seg = run_trajectory(init.beta_prev, init.beta_cur, init.params, kConfinementTime);
    report.measured = measure(seg, p);
    report.verdict = verdict(report.predicted, report.measured, p);
    if (segment_out) {
        *segment_out = std::move(seg);
    }
    return report;
}

Theorem2Record verify_theorem2(const InitialState& init, const BlockPartition& p) {
    Theorem2Record rec;
    rec.report = analyze(init, p, &rec.segment);
    const auto& report = rec.report;

    const auto& z = report.z;
    const auto& meas = report.measured;
    const auto& seg = rec.segment;
    const int r = static_cast<int>(p.r());
    const int m = init.params.m;

    if (z.skipped) {
        maximal_rank_checks(rec, init, meas);
    } else {
        rec.checks.push_back(biconditional("Z1 biconditional", *z.det1, meas, 1, -r));
        if (z.z2) {
            rec.checks.push_back(biconditional("Z2 biconditional", *z.det2, meas, 2, -r));
        }
        if (z.z3) {
            rec.checks.push_back(biconditional("Z3 biconditional", *z.det3, meas, 3, r));
        }

        const ZFromTrajectory zt = z_from_trajectory(seg, p);
        rec.checks.push_back(equality("Z1 definitional", zt.z1, *z.z1));
        if (z.z2) {
            rec.checks.push_back(equality("Z2 definitional", zt.z2, *z.z2));
        }
        if (z.z3) {
            rec.checks.push_back(equality("Z3 definitional", zt.z3, *z.z3));

            const Blocks cur0 = blocks(init.beta_cur.coeff(0), p);
            const Mat coupling = inverse(cur0.d) * cur0.c;
            const auto c3 = try_read([&] { return blocks(seg.at(3).coeff(0), p).c; });
            rec.checks.push_back(equality("C_{m+3,0} fixture", seg.has(3) ? c3 : std::nullopt,
                                          *z.z3 * coupling));
            const auto schur3 = try_read([&] {
                const Blocks k1 = blocks(seg.at(3).coeff(1), p);
                return k1.a - k1.b * coupling;
            });
            rec.checks.push_back(equality("Schur fixture at m+3", seg.has(3) ? schur3 : std::nullopt,
                                          Scalar(mpq_class(-(m + 3), m)) * schur_lead(init.beta_cur, p)));
        }
    }

    // With every certificate nonzero the classes through m+3 are forced;
    // the class at m+4 is part of the confinement verdict itself.
    if (report.predicted.valuations) {
        const std::array<SeriesClass, 3> chain{SeriesClass::PoleLRing, SeriesClass::PoleLRing,
                                               SeriesClass::KRing};
        CheckResult c{"class chain", meas.classes.size() >= 3, {}};
        for (std::size_t k = 0; k < 3 && k < meas.classes.size(); ++k) {
            c.passed = c.passed && meas.classes[k] == chain[k];
            c.detail += std::string(k ? ", " : "") + std::string(to_string(meas.classes[k]));
        }
        rec.checks.push_back(std::move(c));
    }

    if (report.verdict.kind == VerdictKind::Confined) {
        CheckResult c{"reversibility", false, {}};
        try {
            const auto [prev, cur] = run_backward(seg, init.params);
            const int w_prev = std::min(prev.window(), init.beta_prev.window());
            const int w_cur = std::min(cur.window(), init.beta_cur.window());
            c.passed = w_prev > 0 && w_cur > 0 && agree_to_window(prev, init.beta_prev) &&
                       agree_to_window(cur, init.beta_cur);
            c.detail = "shared windows " + std::to_string(w_prev) + ", " + std::to_string(w_cur);
        } catch (const Error& e) {
            c.detail = e.what();
        }
        rec.checks.push_back(std::move(c));
    }
    return rec;
}

} // namespace pclab
