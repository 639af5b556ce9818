#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace smapi {

enum class ErrorCode {
  InvalidRequest,
  QueryParse,
  UnsupportedQuery,
  Capability,
  QuotaExceeded,
  NotFound,
  Conflict,
  Schema,
  Config,
  Storage,
  Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Raised by the query parser; position is a byte offset into the query text.
class QueryParseError : public Error {
public:
    QueryParseError(const std::string& message, std::size_t position)
        : Error(ErrorCode::QueryParse,
                message + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// Query is valid syntax but cannot be executed against any platform
// (pure-negative disjunct, DNF fan-out over the cost guard, ...).
class UnsupportedQueryError : public Error {
public:
    explicit UnsupportedQueryError(const std::string& message)
        : Error(ErrorCode::UnsupportedQuery, message) {}
};

// A rewrite plan or native request violates a platform capability profile.
class CapabilityError : public Error {
public:
    explicit CapabilityError(const std::string& message)
        : Error(ErrorCode::Capability, message) {}
};

class QuotaExceededError : public Error {
public:
    QuotaExceededError(const std::string& message, std::int64_t retry_after_ms)
        : Error(ErrorCode::QuotaExceeded, message), retry_after_ms_(retry_after_ms) {}

    // Time until the budget window resets and tokens refill.
    std::int64_t retry_after_ms() const { return retry_after_ms_; }

private:
    std::int64_t retry_after_ms_;
};

class NotFoundError : public Error {
public:
    explicit NotFoundError(const std::string& message)
        : Error(ErrorCode::NotFound, message) {}
};

class ConflictError : public Error {
public:
    explicit ConflictError(const std::string& message)
        : Error(ErrorCode::Conflict, message) {}
};

// Document cannot be interpreted as an activity (malformed JSON is reported
// with code Schema as well; the message distinguishes the two).
class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& message)
        : Error(ErrorCode::Schema, message) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message)
        : Error(ErrorCode::Config, message) {}
};

class StorageError : public Error {
public:
    explicit StorageError(const std::string& message)
        : Error(ErrorCode::Storage, message) {}
};

// Request-level validation failure carrying per-field messages, mirrored
// into the HTTP error body's "fields" map.
class InvalidRequestError : public Error {
public:
    explicit InvalidRequestError(const std::string& message,
                                 std::map<std::string, std::string> fields = {})
        : Error(ErrorCode::InvalidRequest, message), fields_(std::move(fields)) {}

    const std::map<std::string, std::string>& fields() const { return fields_; }

private:
    std::map<std::string, std::string> fields_;
};

} // namespace smapi
