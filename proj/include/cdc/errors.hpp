#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cdc {

enum class ErrorCode {
    MalformedDomain,
    MalformedTuple,
    ParseError,
    IoError,
    EmptyLattice,
    ConflictingTyping,
    MetaFrozen,
    NotAnAncestor,
    DuplicateRule,
    UnknownConcept,
    NoParent,
    InvalidSpec,
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::MalformedDomain:   return "MalformedDomain";
        case ErrorCode::MalformedTuple:    return "MalformedTuple";
        case ErrorCode::ParseError:        return "ParseError";
        case ErrorCode::IoError:           return "IoError";
        case ErrorCode::EmptyLattice:      return "EmptyLattice";
        case ErrorCode::ConflictingTyping: return "ConflictingTyping";
        case ErrorCode::MetaFrozen:        return "MetaFrozen";
        case ErrorCode::NotAnAncestor:     return "NotAnAncestor";
        case ErrorCode::DuplicateRule:     return "DuplicateRule";
        case ErrorCode::UnknownConcept:    return "UnknownConcept";
        case ErrorCode::NoParent:          return "NoParent";
        case ErrorCode::InvalidSpec:       return "InvalidSpec";
    }
    return "Unknown";
}

// Single exception type; the code tells callers (and the CLI exit-code
// mapping) what went wrong, the message carries location detail.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, std::string(to_string(code)) + ": " + message);
}

} // namespace cdc
