#pragma once

#include <stdexcept>
#include <string>

namespace sramlab {

/// Base class for all sramlab errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Two patterns (or a pattern and a byte buffer) disagree on length.
class LengthMismatchError : public Error {
public:
    explicit LengthMismatchError(const std::string& msg) : Error(msg) {}
};

/// monthly_change called with start == 0.
class UndefinedRateError : public Error {
public:
    explicit UndefinedRateError(const std::string& msg) : Error(msg) {}
};

/// Malformed input while parsing a record file or config document.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line = 0)
        : Error(line ? msg + " (line " + std::to_string(line) + ")" : msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Calibration search finished without reaching the requested tolerances.
/// Carries the best residuals so the caller can report how close it got.
class CalibrationError : public Error {
public:
    CalibrationError(const std::string& msg, std::string residuals)
        : Error(msg), residuals_(std::move(residuals)) {}
    const std::string& residuals() const { return residuals_; }

private:
    std::string residuals_;
};

/// Invalid command line or config file content.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace sramlab
