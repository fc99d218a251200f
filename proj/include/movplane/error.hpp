#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace movplane {

enum class ErrorKind {
    InvalidArgument,
    DomainEmpty,
    DegenerateGradient,
    NotOnBoundary,
    EmptySection,
    EmptyCap,
    NoEventFound,
    EmptyMask,
    LambdaOutOfRange,
    UnconvergedInput,
};

/// Errors are split in two families so the CLI can map them onto exit codes:
/// bad input / geometry (domain errors) versus numerical breakdown.
enum class ErrorFamily { Domain, Numeric };

std::string_view to_string(ErrorKind kind) noexcept;
ErrorFamily family_of(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    ErrorFamily family() const noexcept { return family_of(kind_); }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace movplane
