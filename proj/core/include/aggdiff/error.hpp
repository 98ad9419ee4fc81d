#pragma once

#include <stdexcept>
#include <string>

namespace aggdiff {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by the configuration parser; carries the offending line (0 if none).
class ParseError : public Error {
public:
    ParseError(const std::string& message, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// File-system failures while writing outputs.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace aggdiff
