#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qrac {

enum class ErrorKind {
    NonPrime,
    Overflow,
    DivisionByZero,
    DimensionMismatch,
    NotHermitian,
    NoConvergence,
    RankDeficient,
    NotPrimePower,
    UnbiasednessCheckFailed,
    ParseError,
    NonUnitary,
    WeightError,
    BudgetExceeded,
    NotUnbiased,
    RootNotFound,
    SeedMissing,
    IoError,
    Usage,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace qrac
