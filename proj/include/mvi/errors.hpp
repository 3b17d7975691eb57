#pragma once

#include <stdexcept>
#include <string>

namespace mvi {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input violates a documented invariant (non-positive length, bad word, ...).
class ValidationError : public Error {
public:
    ValidationError(const std::string& field, const std::string& what)
        : Error(field + ": " + what), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Argument outside the mathematical domain of an operation (e.g. I = 0).
class DomainError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

/// A coil has its parallel switch closed while its series switch is up.
class ConflictError : public Error {
public:
    using Error::Error;
};

/// The switch settings leave IN and OUT unconnected.
class NoPathError : public Error {
public:
    using Error::Error;
};

class SingularSystemError : public Error {
public:
    using Error::Error;
};

class CalibrationError : public Error {
public:
    using Error::Error;
};

/// Small-signal analysis requested at or above pull-in.
class BiasUnstableError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

} // namespace mvi
