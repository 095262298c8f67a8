#include "qrac/error.hpp"

namespace qrac {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NonPrime: return "NonPrime";
        case ErrorKind::Overflow: return "Overflow";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::NotPrimePower: return "NotPrimePower";
        case ErrorKind::UnbiasednessCheckFailed: return "UnbiasednessCheckFailed";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::NonUnitary: return "NonUnitary";
        case ErrorKind::WeightError: return "WeightError";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::NotUnbiased: return "NotUnbiased";
        case ErrorKind::RootNotFound: return "RootNotFound";
        case ErrorKind::SeedMissing: return "SeedMissing";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::Usage: return "Usage";
    }
    return "Unknown";
}

}  // namespace qrac
