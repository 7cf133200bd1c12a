#pragma once

#include <stdexcept>
#include <string>

namespace pclab {

enum class ErrorKind {
    DimensionMismatch,
    NonSquare,
    Singular,
    BadPartition,
    SingularBlock,
    RankMismatch,
    SizeMismatch,
    InsufficientTruncation,
    SingularToWindow,
    WindowGrow,
    DegenerateData,
    SingularD,
    Validation,
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so callers (the
// trajectory runner, the CLI) can branch on it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace pclab
