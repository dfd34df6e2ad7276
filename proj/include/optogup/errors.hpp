#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace optogup {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };
struct OverdampedError : DomainError { using DomainError::DomainError; };
struct FreeMassDomainError : DomainError { using DomainError::DomainError; };
struct DegenerateEigenvalueError : Error { using Error::Error; };
struct UnboundedError : Error { using Error::Error; };
struct EmptyResultError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct TruncationError : Error { using Error::Error; };
struct PerturbationError : Error { using Error::Error; };

struct NonFiniteError : Error {
    std::size_t step;
    NonFiniteError(const std::string& what, std::size_t step_index)
        : Error(what + " (step " + std::to_string(step_index) + ")"), step(step_index) {}
};

struct ParseError : Error {
    int line;
    std::string field;
    ParseError(const std::string& what, int line_no, std::string field_name = {})
        : Error("line " + std::to_string(line_no) + (field_name.empty() ? "" : " [" + field_name + "]") + ": " + what),
          line(line_no), field(std::move(field_name)) {}
};

struct ValidationError : Error {
    std::string invariant;
    ValidationError(const std::string& what, std::string violated)
        : Error(what + " (" + violated + ")"), invariant(std::move(violated)) {}
};

} // namespace optogup
