#pragma once

#include <stdexcept>
#include <string>

namespace chemo {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the set on which a function is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// User-supplied data (parameters, initial profiles, config) failed validation.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Config-file error carrying the offending key and line (0 when not line-bound).
class ConfigError : public ValidationError {
public:
    ConfigError(std::string key, int line, const std::string& what)
        : ValidationError(what), key_(std::move(key)), line_(line) {}

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    std::string key_;
    int line_;
};

/// An iterative method failed to reach its tolerance.
class SolverError : public Error {
public:
    using Error::Error;
};

/// G^{-1}(w) is closer to the capacity than floating point can resolve.
class CapacityError : public SolverError {
public:
    CapacityError(const std::string& what, double target)
        : SolverError(what), target_(target) {}
    double target() const noexcept { return target_; }

private:
    double target_;
};

/// Root bracketing hit its caps.
class RangeError : public SolverError {
public:
    using SolverError::SolverError;
};

/// Explicit chemotaxis step would violate the advective CFL bound.
class StepSizeError : public SolverError {
public:
    StepSizeError(const std::string& what, double suggested_dt)
        : SolverError(what), suggested_dt_(suggested_dt) {}
    double suggested_dt() const noexcept { return suggested_dt_; }

private:
    double suggested_dt_;
};

/// An internal invariant broke (ordering of monotone iterates, singular pivot, ...).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace chemo
