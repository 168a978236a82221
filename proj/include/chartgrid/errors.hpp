#pragma once

#include <stdexcept>
#include <string>

namespace chartgrid {

/// Root of every error the harness raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad parameters or configuration values. `field` carries a dotted path when known.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what, std::string field = {})
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class RenderError : public Error {
public:
    using Error::Error;
};

/// Malformed serialized input (gold files, model responses, configs).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Structurally valid input that breaks a domain invariant.
class InvariantError : public Error {
public:
    using Error::Error;
};

class EvaluationError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class ReportError : public Error {
public:
    using Error::Error;
};

/// Transport-level failure that survived all retries.
class BackendError : public Error {
public:
    using Error::Error;
};

/// Credentials missing or rejected. Always fatal for a run.
class AuthError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace chartgrid
