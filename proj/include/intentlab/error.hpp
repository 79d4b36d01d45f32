#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace intentlab {

/// Base of every exception the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument outside its documented domain (minute indices, probabilities, N < 1).
class RangeError : public Error {
public:
    using Error::Error;
};

/// A structurally invalid value or configuration.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Two vectors (or a vector and a store) disagree on dimensionality.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Snapshot decoding failure.
class SnapshotError : public Error {
public:
    enum class Kind { BadMagic, VersionMismatch, Truncated, Corrupt, Io };

    SnapshotError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Event-log / config-file parse failure. Carries every offending line
/// (1-based) found in one pass.
class ParseError : public Error {
public:
    struct Issue {
        std::size_t line = 0;
        std::string message;
    };

    explicit ParseError(std::vector<Issue> issues) : Error(render(issues)), issues_(std::move(issues)) {}
    ParseError(std::size_t line, const std::string& message) : ParseError(std::vector<Issue>{{line, message}}) {}

    const std::vector<Issue>& issues() const noexcept { return issues_; }
    std::size_t line() const noexcept { return issues_.empty() ? 0 : issues_.front().line; }

private:
    static std::string render(const std::vector<Issue>& issues) {
        std::string out;
        for (const auto& issue : issues) {
            if (!out.empty()) out += '\n';
            out += "line " + std::to_string(issue.line) + ": " + issue.message;
        }
        return out;
    }

    std::vector<Issue> issues_;
};

}  // namespace intentlab
