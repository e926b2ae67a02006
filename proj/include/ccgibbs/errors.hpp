#pragma once

#include <stdexcept>
#include <string>

namespace ccgibbs {

// Parameters outside a guaranteed fast-mixing / resource regime.
// The CLI maps this to its own exit code, distinct from I/O failures.
struct RegimeError : std::runtime_error {
    explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

// File / parse problems.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Exact-oracle instance too large to enumerate.
struct EnumerationCapError : std::runtime_error {
    explicit EnumerationCapError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ccgibbs
