#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ncchern {

// Base of every error raised by the library. The CLI maps each subclass to a
// fixed exit code (see cli.hpp).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed textual input. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(format(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        if (line == 0)
            return what;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

// A value violates a documented invariant (shape, torsion relations, idempotence, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Diagram is missing a node or arrow that the requested operation needs.
class IncompleteDiagram : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// The computation is well posed but the library declines to decide it
// (non-split extension, missing input fact).
class Refusal : public Error {
public:
    using Error::Error;
};

class MissingFact : public Refusal {
public:
    using Refusal::Refusal;
};

// A numerical guard tripped: near-zero sample, undersampled loop, singular Jacobian.
class NumericalGuard : public Error {
public:
    NumericalGuard(const std::string& what, std::size_t index)
        : Error(what + " (sample " + std::to_string(index) + ")"), index_(index) {}

    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

// The loop meets the origin, so its degree is undefined. The CLI treats
// this as a refusal rather than a numerical failure.
class ZeroSample : public NumericalGuard {
public:
    using NumericalGuard::NumericalGuard;
};

} // namespace ncchern
