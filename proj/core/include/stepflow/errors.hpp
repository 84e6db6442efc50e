#pragma once

#include <stdexcept>
#include <string>

namespace stepflow {

// Thrown when an algorithm fails at runtime for numerical reasons: a cell
// height becomes nonpositive, a root bracket cannot be found, a wave pattern
// turns out to be infeasible. Callers that drive batch sweeps map this to a
// dedicated exit code.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when externally supplied data fails a consistency check: a tabulated
// state chain whose connector relations do not hold, a registry checksum
// mismatch, a malformed data file.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stepflow
