#pragma once

#include <stdexcept>
#include <string>

namespace scc {

// Bad inputs: wrong sizes, out-of-range parameters, malformed files.
struct validation_error : std::invalid_argument {
    explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Well-formed inputs on which the requested quantity does not exist
// (unbounded domination ratio, no normalization constant, covering step
// unreachable at this resolution, ...).
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace scc
