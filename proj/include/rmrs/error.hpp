#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rmrs {

// Base class for all engine errors. The CLI maps these to exit code 2
// unless a subcommand defines a more specific mapping.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Multiset difference called without containment. Signals a caller bug:
// rule application guards with enabledness before subtracting.
struct NotContainedError : Error {
    using Error::Error;
};

struct RuleNotEnabledError : Error {
    using Error::Error;
};

struct NotApplicableError : Error {
    using Error::Error;
};

struct UnknownRuleError : Error {
    using Error::Error;
};

// Exploration exceeded the configured configuration cap. Raised instead of
// silently truncating results.
struct ExplosionLimitError : Error {
    explicit ExplosionLimitError(std::size_t cap)
        : Error("exploration exceeded configuration cap of " + std::to_string(cap)),
          cap(cap) {}
    std::size_t cap;
};

// Text input error with a 1-based source position. column == 0 means the
// position is line-granular.
struct ParseError : Error {
    ParseError(int line, int column, const std::string& what)
        : Error(format(line, column, what)), line(line), column(column) {}

    int line;
    int column;

    static std::string format(int line, int column, const std::string& what) {
        std::string s = "line " + std::to_string(line);
        if (column > 0) s += ", col " + std::to_string(column);
        return s + ": " + what;
    }
};

}  // namespace rmrs
