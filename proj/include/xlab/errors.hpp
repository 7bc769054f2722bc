#pragma once

#include <stdexcept>
#include <string>

namespace xlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual or JSON input. Carries the 1-based line when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Input violates a structural invariant (asymmetric matrix, bad partition, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A Markov space atom carries zero marginal mass.
class DegeneracyError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A computation would exceed its table-size or enumeration budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// An operation's mathematical precondition does not hold (e.g. a triangle).
class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace xlab
