#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bibscreen {

/// Base of every exception thrown by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments, bad configuration, or a violated call precondition.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Input data that cannot be used (malformed files, unknown ids, ...).
class DataError : public Error {
public:
    using Error::Error;
};

class UnknownIdError : public DataError {
public:
    UnknownIdError(const std::string& kind, const std::string& id)
        : DataError("unknown " + kind + ": " + id), id_(id) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

/// Raised when a generator or funnel spec has one or more invalid fields.
class SpecError : public UsageError {
public:
    explicit SpecError(std::vector<std::string> violations)
        : UsageError(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid spec";
        for (const auto& s : v) {
            out += "; ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

}  // namespace bibscreen
