#pragma once

#include <stdexcept>
#include <string>

namespace oulab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation (bad time, aliasing grid, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Numeric growth or conditioning problem (overflowing propagation, amplified inversion).
class NumericError : public Error {
public:
    NumericError(const std::string& what, int mode) : Error(what), mode_(mode) {}

    /// Offending mode index (0 for the constant mode).
    int mode() const noexcept { return mode_; }

private:
    int mode_;
};

/// Malformed configuration or input file. `line` is 1-based, 0 when not applicable.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace oulab
