#pragma once

#include <stdexcept>
#include <string>

namespace facet {

// Unreadable or malformed input files. The CLI maps this to exit code 2.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Well-formed input that violates a data invariant (index out of range,
// unknown sample id, missing field, ...). CLI exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Degenerate numeric situations: zero variance, rank deficiency, empty
// denominators that have no defined fallback. CLI exit code 1.
struct MathError : std::runtime_error {
    explicit MathError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace facet
