#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace chorus {

/// Configuration rejected at load or run setup. `field` names the offending
/// config entry (JSON-pointer style, e.g. "actors[3].theta_action").
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message),
          field_(std::move(field)) {}

    explicit ConfigError(const std::string& message) : ConfigError("", message) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A domain invariant was violated (dangling reply parent, duplicate vote, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Agent backend failure, surfaced to the behavior layer which applies the
/// per-event error policy (skip effect, keep the actor scheduled).
class AgentError : public std::runtime_error {
public:
    enum class Kind { Transport, MalformedOutput, EmptyOutput };

    AgentError(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Platform adapter failure. `Unavailable` means the transport itself failed
/// (no HTTP response at all) and aborts the run; every other kind is an
/// application-level rejection that only skips the current effect.
class PlatformError : public std::runtime_error {
public:
    enum class Kind { Rejected, Duplicate, NotFound, Unauthorized, Unavailable };

    PlatformError(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }
    bool fatal() const noexcept { return kind_ == Kind::Unavailable; }

private:
    Kind kind_;
};

/// File I/O failure carrying the offending path.
class IoError : public std::runtime_error {
public:
    IoError(std::string path, const std::string& message)
        : std::runtime_error(message + " (" + path + ")"), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// history.jsonl line failed to parse or violated a record invariant.
class HistoryParseError : public std::runtime_error {
public:
    HistoryParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace chorus
