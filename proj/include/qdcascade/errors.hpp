#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace qdc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed config text or inconsistent model toggles.
class ConfigError : public Error {
public:
    ConfigError(const std::string& msg, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// A parameter violates its physical invariant.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& msg)
        : Error(field + ": " + msg), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

// Quadrature non-convergence, step underflow, invalid spectra.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Query outside a tabulated or simulated range.
class RangeError : public Error {
public:
    using Error::Error;
};

// Failure inside one pipeline stage, tagged with the module that raised it.
class StageError : public Error {
public:
    StageError(std::string module, const std::string& msg)
        : Error(module + ": " + msg), module_(std::move(module)) {}
    const std::string& module() const { return module_; }

private:
    std::string module_;
};

// Warnings are routed through a process-wide sink; the default writes to stderr.
using WarningSink = std::function<void(const std::string&)>;
WarningSink set_warning_sink(WarningSink sink);
void warn(const std::string& message);

} // namespace qdc
