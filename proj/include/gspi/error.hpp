#pragma once

#include <stdexcept>
#include <string>

namespace gspi {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (bad parameter, malformed file).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Text input could not be parsed. `line()` is 1-based, 0 when not applicable.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : ValidationError(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Random graph generation produced a degenerate result.
class GenerationError : public Error {
public:
    using Error::Error;
};

/// Eigensolver or other numeric routine failed.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace gspi
