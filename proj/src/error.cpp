#include "sqnm/error.hpp"

namespace sqnm {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidInput: return "invalid_input";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::InvalidExponent: return "invalid_exponent";
    case ErrorKind::SplitMismatch: return "split_mismatch";
    case ErrorKind::InfeasibleDimension: return "infeasible_dimension";
    case ErrorKind::UnsupportedSplit: return "unsupported_split";
    case ErrorKind::UnsupportedExponent: return "unsupported_exponent";
    case ErrorKind::InvalidProblem: return "invalid_problem";
    case ErrorKind::NumericalFailure: return "numerical_failure";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

} // namespace sqnm
