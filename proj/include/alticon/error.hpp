#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace alticon {

/// Error taxonomy shared across the library. Soft failures (missing OCR
/// engine, unresolvable drawable) are reported through Diagnostic sinks
/// instead; exceptions are reserved for contract violations.
class Error : public std::runtime_error {
public:
    enum class Kind {
        BadPath,
        Parse,
        AlreadyAnnotated,
        MissingLabel,
        Backend,
        EmptyGeneration,
        Validation,
        Config,
        Io,
    };

    Error(Kind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Raised when a child-index path does not address a node; carries the
/// depth at which resolution failed.
class BadPathError : public Error {
public:
    BadPathError(std::string message, int depth)
        : Error(Kind::BadPath, std::move(message)), depth_(depth) {}

    int depth() const noexcept { return depth_; }

private:
    int depth_;
};

class XmlParseError : public Error {
public:
    XmlParseError(std::string message, int line, int column)
        : Error(Kind::Parse, std::move(message)), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

struct Diagnostic {
    std::string where;
    std::string message;
};

using DiagnosticSink = std::vector<Diagnostic>;

inline void diag(DiagnosticSink* sink, std::string where, std::string message) {
    if (sink != nullptr) {
        sink->push_back({std::move(where), std::move(message)});
    }
}

}  // namespace alticon
