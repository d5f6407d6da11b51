#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tagnet {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed content in an input file. Message carries path:line.
struct ParseError : Error {
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ": " + what), path(path), line(line) {}

    std::string path;
    std::size_t line;
};

// An identifier that is not present in any queried store.
struct NotFoundError : Error {
    using Error::Error;
};

// Precondition violation on an operation argument (u == v, empty input, ...).
struct DomainError : Error {
    using Error::Error;
};

// Request inconsistent with the current store state, e.g. removing an absent
// triple or applying a delta to a distributional index.
struct StateError : Error {
    using Error::Error;
};

// Well-formed input that cannot be used: missing baseline score for a sampled
// pair, empty distance stratum, degenerate labels.
struct DataError : Error {
    using Error::Error;
};

} // namespace tagnet
