#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mph {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number where parsing failed (0 if unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that violates a precondition or invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace mph
