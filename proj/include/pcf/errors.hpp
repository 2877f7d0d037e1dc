#pragma once

#include <stdexcept>
#include <string>

namespace pcf {

/// Base class for everything thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid input or an operation outside its mathematical domain
/// (division by zero, malformed literals, bad certificates, ...).
/// Maps to CLI exit code 1.
struct DomainError : Error {
    using Error::Error;
};

struct DivisionByZero : DomainError {
    DivisionByZero() : DomainError("division by zero") {}
};

struct NoSquareRoot : DomainError {
    using DomainError::DomainError;
};

struct ParseError : DomainError {
    ParseError(const std::string& what, std::size_t position)
        : DomainError(what + " (at position " + std::to_string(position) + ")"),
          pos(position) {}
    std::size_t pos;
};

/// The available precision cannot decide the question. This is a
/// first-class outcome of the theory, not a usage error; the CLI maps
/// it to exit code 2.
struct PrecisionExhausted : Error {
    PrecisionExhausted() : Error("precision exhausted") {}
    using Error::Error;
};

/// An iteration budget ran out before the computation settled.
/// Also maps to CLI exit code 2.
struct BudgetExhausted : Error {
    BudgetExhausted() : Error("budget exhausted") {}
    using Error::Error;
};

/// A series stream produced exponents that fail to strictly decrease.
struct StreamInvariantViolation : DomainError {
    StreamInvariantViolation()
        : DomainError("series stream exponents must strictly decrease") {}
};

}  // namespace pcf
