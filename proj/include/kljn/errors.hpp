#pragma once

#include <stdexcept>
#include <string>

namespace kljn {

/// Base of every error raised by the library. CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scalar argument or trace violates an operation's precondition.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A SystemConfig / LevelSet invariant is violated. The message names the bound.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Not enough samples or trials to form the requested estimate.
class InsufficientData : public Error {
public:
    using Error::Error;
};

/// A closed-form approximation was requested outside its validity regime.
class ApproximationDomainError : public Error {
public:
    using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
public:
    using Error::Error;
};

/// A planned experiment is too small to make its statistical assertion.
class PlanSizeError : public InsufficientData {
public:
    PlanSizeError(const std::string& what, std::size_t suggested_trials)
        : InsufficientData(what), suggested_trials_(suggested_trials) {}

    std::size_t suggested_trials() const noexcept { return suggested_trials_; }

private:
    std::size_t suggested_trials_;
};

}  // namespace kljn
