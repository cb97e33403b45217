#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sqnm {

enum class ErrorKind {
    InvalidInput,
    Dimension,
    InvalidExponent,
    SplitMismatch,
    InfeasibleDimension,
    UnsupportedSplit,
    UnsupportedExponent,
    InvalidProblem,
    NumericalFailure,
    Parse,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base exception for every library failure; `kind()` is stable and is what the CLI
/// reports in its JSON error object.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised by the solvers when backtracking cannot restore descent. Carries the
/// objective values recorded up to the failing iteration.
class NumericalFailure : public Error {
public:
    NumericalFailure(const std::string& message, std::vector<double> trace)
        : Error(ErrorKind::NumericalFailure, message), trace_(std::move(trace)) {}

    const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace sqnm
