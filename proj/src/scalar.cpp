#include "pclab/scalar.hpp"

#include <ostream>

#include "pclab/error.hpp"

namespace pclab {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::BadPartition: return "BadPartition";
    case ErrorKind::SingularBlock: return "SingularBlock";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::InsufficientTruncation: return "InsufficientTruncation";
    case ErrorKind::SingularToWindow: return "SingularToWindow";
    case ErrorKind::WindowGrow: return "WindowGrow";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::SingularD: return "SingularD";
    case ErrorKind::Validation: return "Validation";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

Scalar::Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
}

namespace {

mpq_class make_q(std::int64_t num, std::int64_t den) {
    if (den == 0) {
        throw Error(ErrorKind::Validation, "zero denominator");
    }
    mpq_class q;
    mpz_set_si(q.get_num_mpz_t(), static_cast<long>(num));
    mpz_set_si(q.get_den_mpz_t(), static_cast<long>(den));
    q.canonicalize();
    return q;
}

} // namespace

Scalar Scalar::rational(std::int64_t num, std::int64_t den) {
    return Scalar(make_q(num, den), 0);
}

Scalar Scalar::gaussian(std::int64_t re_num, std::int64_t re_den,
                        std::int64_t im_num, std::int64_t im_den) {
    return Scalar(make_q(re_num, re_den), make_q(im_num, im_den));
}

Scalar Scalar::reciprocal() const {
    if (is_zero()) {
        throw Error(ErrorKind::Singular, "reciprocal of zero scalar");
    }
    if (is_real()) {
        return Scalar(1 / re_, 0);
    }
    const mpq_class n = norm();
    return Scalar(re_ / n, -im_ / n);
}

Scalar& Scalar::operator+=(const Scalar& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    if (is_real() && o.is_real()) {
        re_ *= o.re_;
        return *this;
    }
    mpq_class re = re_ * o.re_ - im_ * o.im_;
    mpq_class im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    if (o.is_zero()) {
        throw Error(ErrorKind::Singular, "division by zero scalar");
    }
    if (o.is_real()) {
        re_ /= o.re_;
        im_ /= o.re_;
        return *this;
    }
    return *this *= o.reciprocal();
}

std::string Scalar::to_string() const {
    if (is_real()) {
        return re_.get_str();
    }
    if (sgn(re_) == 0) {
        return im_.get_str() + "i";
    }
    std::string out = re_.get_str();
    if (sgn(im_) > 0) {
        out += '+';
    }
    return out + im_.get_str() + "i";
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) {
    return os << s.to_string();
}

} // namespace pclab
